//! Transformation between two connected realizations of the same degree
//! vector using at most `delta(G, H)` flips.
//!
//! Each round finds one or two flips that keep every intermediate graph
//! connected, never take any edge below its multiplicity in the original
//! intersection, and shrink the symmetric difference by at least two.
//! Since a flip changes the symmetric difference by at most four, the
//! optimum needs at least `delta / 4` flips, making this a
//! 4-approximation.

use crate::error::{Error, Result};
use crate::multigraph::{Flip, FlipDirection, FlipSequence, Multigraph, Vertex, VertexPair};

/// Outcome of a connected transformation, with replay-verified counters.
#[derive(Debug, Clone)]
pub struct TransformReport {
    pub flips: FlipSequence,
    pub delta_initial: usize,
    pub delta_final: usize,
    /// Times an intermediate multiplicity dropped below the original
    /// `G cap H` multiplicity. Always 0 for sequences produced here.
    pub goodedge_violations: usize,
}

fn check_inputs(g: &Multigraph, h: &Multigraph) -> Result<()> {
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::SizeMismatch(g.vertex_count(), h.vertex_count()));
    }
    for v in 0..g.vertex_count() {
        if g.degree(v) != h.degree(v) {
            return Err(Error::DegreeMismatch(v));
        }
    }
    if !g.is_connected() || !h.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(())
}

/// Applies `f` to `cur` provided it only consumes surplus edges (relative
/// to the target `h`) and keeps the graph connected. Returns the next
/// graph on success.
fn checked_step(cur: &Multigraph, h: &Multigraph, f: Flip) -> Option<Multigraph> {
    let (s1, s2) = f.sources();
    if s1 == s2 {
        if cur.multiplicity_of(s1) < h.multiplicity_of(s1) + 2 {
            return None;
        }
    } else {
        if cur.multiplicity_of(s1) <= h.multiplicity_of(s1) {
            return None;
        }
        if cur.multiplicity_of(s2) <= h.multiplicity_of(s2) {
            return None;
        }
    }
    let next = cur.apply_flip(f).ok()?;
    if !next.is_connected() {
        return None;
    }
    Some(next)
}

/// One or two flips that keep connectivity, flip only surplus edges, and
/// decrease `delta(G, H)` by at least two.
pub fn improve_step(g: &Multigraph, h: &Multigraph) -> Result<Vec<Flip>> {
    check_inputs(g, h)?;
    let delta = g.delta(h)?;
    if delta == 0 {
        return Err(Error::AlreadyEqual);
    }
    let bad_g = g.minus(h)?;
    let bad_pairs: Vec<VertexPair> = bad_g.iter().map(|(p, _)| p).collect();

    // A surplus edge on a cycle can be rewired onto a deficient edge in
    // one shot.
    for &uv in &bad_pairs {
        let pool = [(uv, 1usize)].into_iter().collect();
        if g.non_bridge_edge_in(&pool).is_none() {
            continue;
        }
        for &wx in &bad_pairs {
            if wx.contains(uv.small()) || wx.contains(uv.large()) {
                continue;
            }
            for f in orientations(uv, wx) {
                if let Some(next) = checked_step(g, h, f) {
                    if next.delta(h).unwrap() + 2 <= delta {
                        return Ok(vec![f]);
                    }
                }
            }
        }
    }

    // All surplus edges are bridges: contract the components of the
    // intersection; the surplus edges form a tree on them. Work at a leaf.
    let inter = g.intersect(h)?;
    let mut inter_graph = Multigraph::empty(g.vertex_count());
    for (pair, m) in inter.iter() {
        inter_graph.add_edge_mult(pair.small(), pair.large(), m)?;
    }
    let comps = inter_graph.components();
    let mut comp_of = vec![0usize; g.vertex_count()];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    let mut comp_degree = vec![0usize; comps.len()];
    for &p in &bad_pairs {
        if comp_of[p.small()] != comp_of[p.large()] {
            comp_degree[comp_of[p.small()]] += bad_g.multiplicity(p);
            comp_degree[comp_of[p.large()]] += bad_g.multiplicity(p);
        }
    }
    let bad_h = h.minus(g)?;
    for (leaf_ci, _) in comps.iter().enumerate() {
        if comp_degree[leaf_ci] != 1 {
            continue;
        }
        // The unique surplus edge leaving the leaf, oriented leaf-first.
        let Some((v1, v2)) = bad_pairs.iter().find_map(|p| {
            if comp_of[p.small()] == leaf_ci && comp_of[p.large()] != leaf_ci {
                Some((p.small(), p.large()))
            } else if comp_of[p.large()] == leaf_ci && comp_of[p.small()] != leaf_ci {
                Some((p.large(), p.small()))
            } else {
                None
            }
        }) else {
            continue;
        };
        // Deficient partners of v1 and surplus partners of those.
        let v3s: Vec<Vertex> = bad_h
            .iter()
            .filter(|(p, _)| p.contains(v1))
            .map(|(p, _)| p.other(v1))
            .collect();
        for &v3 in &v3s {
            let s3 = comp_of[v3];
            let ws: Vec<Vertex> = bad_pairs
                .iter()
                .filter(|p| p.contains(v3))
                .map(|p| p.other(v3))
                .collect();
            // Direct exchange when it keeps the graph connected.
            for &w in &ws {
                if let Ok(f) = Flip::new(v1, v2, v3, w) {
                    if let Some(next) = checked_step(g, h, f) {
                        if next.delta(h).unwrap() + 2 <= delta {
                            return Ok(vec![f]);
                        }
                    }
                }
            }
            // Detour: first move the leaf edge onto another surplus edge
            // leaving v3's component, then exchange with v3's own edge.
            let detours: Vec<(Vertex, Vertex)> = bad_pairs
                .iter()
                .filter_map(|p| {
                    if comp_of[p.small()] == s3 && comp_of[p.large()] != s3 {
                        Some((p.small(), p.large()))
                    } else if comp_of[p.large()] == s3 && comp_of[p.small()] != s3 {
                        Some((p.large(), p.small()))
                    } else {
                        None
                    }
                })
                .collect();
            for &(v3p, v4) in &detours {
                let Ok(f1) = Flip::new(v1, v2, v3p, v4) else {
                    continue;
                };
                let Some(next) = checked_step(g, h, f1) else {
                    continue;
                };
                let d1 = next.delta(h).unwrap();
                if d1 > delta {
                    continue;
                }
                if d1 + 2 <= delta {
                    return Ok(vec![f1]);
                }
                for &w in &ws {
                    let Ok(f2) = Flip::new(v1, v3p, v3, w) else {
                        continue;
                    };
                    if let Some(last) = checked_step(&next, h, f2) {
                        if last.delta(h).unwrap() + 2 <= delta {
                            return Ok(vec![f1, f2]);
                        }
                    }
                }
            }
        }
    }

    
    
    // Exhaustive fallback over one- and two-flip sequences of surplus
    // edges. The lemma guarantees the structured search above succeeds,
    // so this is a safety net for shapes it missed.
    let candidates = |cur: &Multigraph| -> Vec<Flip> {
        let bad = cur.minus(h).unwrap();
        let pairs: Vec<VertexPair> = bad.iter().map(|(p, _)| p).collect();
        let mut out = Vec::new();
        for &p in &pairs {
            for &q in &pairs {
                out.extend(orientations(p, q));
            }
        }
        out
    };
    for f in candidates(g) {
        if let Some(next) = checked_step(g, h, f) {
            let d1 = next.delta(h).unwrap();
            if d1 + 2 <= delta {
                return Ok(vec![f]);
            }
            if d1 <= delta {
                for f2 in candidates(&next) {
                    if let Some(last) = checked_step(&next, h, f2) {
                        if last.delta(h).unwrap() + 2 <= delta {
                            return Ok(vec![f, f2]);
                        }
                    }
                }
            }
        }
    }
    Err(Error::PreconditionViolated(
        "no improving flip sequence found".into(),
    ))
}

/// The four flips consuming one copy each of `p` and `q`.
fn orientations(p: VertexPair, q: VertexPair) -> Vec<Flip> {
    let mut out = Vec::new();
    for (a, b) in [(p.small(), p.large()), (p.large(), p.small())] {
        for (c, d) in [(q.small(), q.large()), (q.large(), q.small())] {
            if let Ok(f) = Flip::new(a, b, c, d) {
                out.push(f);
            }
        }
    }
    out
}

/// Transforms `g` into `h` inside the family of connected realizations,
/// emitting at most `delta(g, h)` flips.
pub fn transform_connected(g: &Multigraph, h: &Multigraph) -> Result<TransformReport> {
    check_inputs(g, h)?;
    let delta_initial = g.delta(h)?;
    let mut flips = FlipSequence::new();
    let mut cur = g.clone();
    let mut delta = delta_initial;
    while delta > 0 {
        let step = improve_step(&cur, h)?;
        for f in step {
            cur = cur.apply_flip(f)?;
            flips.push(f, FlipDirection::Forward);
        }
        let next_delta = cur.delta(h)?;
        debug_assert!(next_delta + 2 <= delta, "step failed to make progress");
        delta = next_delta;
    }
    debug_assert_eq!(&cur, h);
    let report = verify_transform(g, h, &flips)?;
    Ok(report)
}

/// Replays `flips` from `g`, checking the invariants and producing the
/// report. Exposed for the CLI's self-verification.
pub fn verify_transform(
    g: &Multigraph,
    h: &Multigraph,
    flips: &FlipSequence,
) -> Result<TransformReport> {
    let delta_initial = g.delta(h)?;
    let inter = g.intersect(h)?;
    let mut violations = 0usize;
    let mut cur = g.clone();
    for (f, _) in flips.iter() {
        cur = cur.apply_flip(*f)?;
        if !cur.is_connected() {
            return Err(Error::NotConnected);
        }
        for (pair, m) in inter.iter() {
            if cur.multiplicity_of(pair) < m {
                violations += 1;
            }
        }
    }
    if &cur != h {
        return Err(Error::PreconditionViolated(
            "flip sequence does not reach the target".into(),
        ));
    }
    Ok(TransformReport {
        flips: flips.clone(),
        delta_initial,
        delta_final: 0,
        goodedge_violations: violations,
    })
}
