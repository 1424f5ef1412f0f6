//! Brute-force reference implementations for small instances.
//!
//! These enumerate loop-free multigraphs directly and never go through the
//! constructive algorithms, so they can serve as independent ground truth
//! in tests and behind the `--oracle` CLI flag.

use crate::error::Result;
use crate::fragments::{FragmentTree, NestedCollection};
use crate::multigraph::{DegreeVector, Multigraph};

/// All loop-free multigraphs on `s.len()` labeled vertices whose degree
/// vector is exactly `s`, with per-pair multiplicity at most `max_mult`
/// (further capped by the endpoint degrees, which no loop-free
/// realization can exceed).
pub fn all_realizations(s: &DegreeVector, max_mult: usize) -> Vec<Multigraph> {
    let n = s.len();
    if n == 0 {
        return vec![Multigraph::empty(0)];
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    // last_pair_of[v] = index of the last pair touching v, for the
    // exact-degree pruning below.
    let mut last_pair_of = vec![usize::MAX; n];
    for (idx, &(u, v)) in pairs.iter().enumerate() {
        last_pair_of[u] = idx;
        last_pair_of[v] = idx;
    }
    let mut residual: Vec<usize> = s.0.clone();
    let mut chosen: Vec<usize> = vec![0; pairs.len()];
    let mut out = Vec::new();
    if pairs.is_empty() {
        // Single vertex: realizable only with degree 0.
        if residual.iter().all(|&r| r == 0) {
            out.push(Multigraph::empty(n));
        }
        return out;
    }
    rec(
        0,
        &pairs,
        &last_pair_of,
        &mut residual,
        &mut chosen,
        max_mult,
        &mut out,
    );
    out
}

fn rec(
    idx: usize,
    pairs: &[(usize, usize)],
    last_pair_of: &[usize],
    residual: &mut [usize],
    chosen: &mut [usize],
    max_mult: usize,
    out: &mut Vec<Multigraph>,
) {
    if idx == pairs.len() {
        if residual.iter().all(|&r| r == 0) {
            let triples: Vec<(usize, usize, usize)> = pairs
                .iter()
                .zip(chosen.iter())
                .filter(|(_, &m)| m > 0)
                .map(|(&(u, v), &m)| (u, v, m))
                .collect();
            out.push(Multigraph::from_edges(residual.len(), &triples).unwrap());
        }
        return;
    }
    let (u, v) = pairs[idx];
    let cap = residual[u].min(residual[v]).min(max_mult);
    for m in 0..=cap {
        residual[u] -= m;
        residual[v] -= m;
        chosen[idx] = m;
        // Degrees must be exactly met once a vertex has no pairs left.
        let u_ok = last_pair_of[u] != idx || residual[u] == 0;
        let v_ok = last_pair_of[v] != idx || residual[v] == 0;
        if u_ok && v_ok {
            rec(idx + 1, pairs, last_pair_of, residual, chosen, max_mult, out);
        }
        residual[u] += m;
        residual[v] += m;
    }
    chosen[idx] = 0;
}

/// All members of the constrained family: realizations of `s` in which
/// every fragment of `cc` induces a connected subgraph.
pub fn members(
    s: &DegreeVector,
    cc: &NestedCollection,
    max_mult: usize,
) -> Result<Vec<Multigraph>> {
    let tree = FragmentTree::build(cc);
    Ok(all_realizations(s, max_mult)
        .into_iter()
        .filter(|g| tree.all_fragments_connected(g))
        .collect())
}

/// Ground-truth realizability: does any member exist?
pub fn is_realizable(s: &DegreeVector, cc: &NestedCollection) -> Result<bool> {
    let max_mult = s.0.iter().copied().max().unwrap_or(0);
    Ok(!members(s, cc, max_mult)?.is_empty())
}
