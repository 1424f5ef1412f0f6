//! Flip-distance machinery at small scale: the exact unconstrained
//! distance via symmetric circuit partitions, exact constrained distance
//! via breadth-first search over the reconfiguration graph, and exhaustive
//! enumeration of the constrained family by flip traversal.
//!
//! The symmetric difference of two realizations decomposes into closed
//! walks alternating between surplus (`G - H`) and deficit (`H - G`)
//! edges. With `m(G, H)` the maximum number of circuits in such a
//! partition, the unconstrained flip distance equals
//! `psi(G, H) = delta(G, H) / 2 - m(G, H)`. Computing `m` is NP-complete,
//! so the exact mode carries a hard size cap.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::fragments::{FragmentTree, NestedCollection};
use crate::multigraph::{DegreeVector, Flip, Multigraph, Vertex, VertexPair};
use crate::realize;

/// Which side of the symmetric difference an edge occurrence lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Surplus,
    Deficit,
}

/// One edge occurrence of an alternating circuit, in walk order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitEdge {
    pub pair: VertexPair,
    pub side: Side,
}

/// Pairwise edge-disjoint alternating circuits covering the whole
/// symmetric difference.
#[derive(Debug, Clone, Default)]
pub struct SymmetricCircuitPartition {
    pub circuits: Vec<Vec<CircuitEdge>>,
}

impl SymmetricCircuitPartition {
    pub fn count(&self) -> usize {
        self.circuits.len()
    }

    /// Structural validation: each circuit is a closed alternating walk,
    /// and together they use exactly the symmetric difference.
    pub fn validate(&self, g: &Multigraph, h: &Multigraph) -> Result<()> {
        let surplus = g.minus(h)?;
        let deficit = h.minus(g)?;
        let mut used_surplus: BTreeMap<VertexPair, usize> = BTreeMap::new();
        let mut used_deficit: BTreeMap<VertexPair, usize> = BTreeMap::new();
        for circuit in &self.circuits {
            if circuit.len() < 2 || circuit.len() % 2 != 0 {
                return Err(Error::PreconditionViolated(
                    "circuit length must be even and at least 2".into(),
                ));
            }
            // Walk the circuit, checking alternation and closure.
            let first = circuit[0];
            if first.side != Side::Surplus {
                return Err(Error::PreconditionViolated(
                    "circuits start on the surplus side".into(),
                ));
            }
            let mut at = first.pair.small();
            let start = at;
            for (i, edge) in circuit.iter().enumerate() {
                let want = if i % 2 == 0 { Side::Surplus } else { Side::Deficit };
                if edge.side != want {
                    return Err(Error::PreconditionViolated(
                        "circuit does not alternate sides".into(),
                    ));
                }
                if !edge.pair.contains(at) {
                    return Err(Error::PreconditionViolated(
                        "circuit edges do not chain".into(),
                    ));
                }
                at = edge.pair.other(at);
                match edge.side {
                    Side::Surplus => *used_surplus.entry(edge.pair).or_insert(0) += 1,
                    Side::Deficit => *used_deficit.entry(edge.pair).or_insert(0) += 1,
                }
            }
            if at != start {
                return Err(Error::PreconditionViolated("circuit does not close".into()));
            }
        }
        let matches = |used: &BTreeMap<VertexPair, usize>,
                       want: &crate::multigraph::EdgeMultiset| {
            want.iter().all(|(p, m)| used.get(&p).copied().unwrap_or(0) == m)
                && used.iter().all(|(p, &m)| want.multiplicity(*p) == m)
        };
        if !matches(&used_surplus, &surplus) || !matches(&used_deficit, &deficit) {
            return Err(Error::PreconditionViolated(
                "partition does not cover the symmetric difference exactly".into(),
            ));
        }
        Ok(())
    }
}

/// How to compute the circuit partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiMode {
    /// Maximizes the number of circuits; exponential, guarded by the
    /// size cap. The resulting value is the exact unconstrained distance.
    Exact,
    /// Extracts shortest circuits first. Valid partition, but the value
    /// is only an upper bound on the distance; reported as a heuristic.
    Greedy,
}

/// Hard cap on `delta(G, H)` for the exact circuit search.
pub const PSI_EXACT_CAP: usize = 16;

/// Remaining symmetric-difference edges during circuit search.
#[derive(Clone)]
struct DiffState {
    surplus: BTreeMap<VertexPair, usize>,
    deficit: BTreeMap<VertexPair, usize>,
}

impl DiffState {
    fn total(&self) -> usize {
        self.surplus.values().sum::<usize>() + self.deficit.values().sum::<usize>()
    }

    fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (p, m) in &self.surplus {
            out.extend_from_slice(&(p.small() as u8).to_le_bytes());
            out.extend_from_slice(&(p.large() as u8).to_le_bytes());
            out.push(*m as u8);
        }
        out.push(0xFF);
        for (p, m) in &self.deficit {
            out.extend_from_slice(&(p.small() as u8).to_le_bytes());
            out.extend_from_slice(&(p.large() as u8).to_le_bytes());
            out.push(*m as u8);
        }
        out
    }

    fn side(&self, side: Side) -> &BTreeMap<VertexPair, usize> {
        match side {
            Side::Surplus => &self.surplus,
            Side::Deficit => &self.deficit,
        }
    }

    fn take(&mut self, pair: VertexPair, side: Side) {
        let map = match side {
            Side::Surplus => &mut self.surplus,
            Side::Deficit => &mut self.deficit,
        };
        match map.get_mut(&pair) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                map.remove(&pair);
            }
            None => unreachable!("taking an absent edge"),
        }
    }

    fn put(&mut self, pair: VertexPair, side: Side) {
        let map = match side {
            Side::Surplus => &mut self.surplus,
            Side::Deficit => &mut self.deficit,
        };
        *map.entry(pair).or_insert(0) += 1;
    }
}

/// All alternating circuits through the anchor edge (the smallest
/// remaining surplus pair, walked from its smaller endpoint).
fn circuits_through_anchor(state: &DiffState) -> Vec<Vec<CircuitEdge>> {
    let Some((&anchor, _)) = state.surplus.iter().next() else {
        return Vec::new();
    };
    let start = anchor.small();
    let mut out = Vec::new();
    let mut walk = vec![CircuitEdge {
        pair: anchor,
        side: Side::Surplus,
    }];
    let mut rest = state.clone();
    rest.take(anchor, Side::Surplus);
    extend_walk(
        &mut rest,
        &mut walk,
        start,
        anchor.other(start),
        Side::Deficit,
        &mut out,
    );
    out
}

fn extend_walk(
    rest: &mut DiffState,
    walk: &mut Vec<CircuitEdge>,
    start: Vertex,
    at: Vertex,
    next_side: Side,
    out: &mut Vec<Vec<CircuitEdge>>,
) {
    if at == start && walk.len() % 2 == 0 {
        out.push(walk.clone());
        // A longer circuit may still pass through the start again, so do
        // not return here.
    }
    let options: Vec<VertexPair> = rest
        .side(next_side)
        .keys()
        .filter(|p| p.contains(at))
        .copied()
        .collect();
    for pair in options {
        rest.take(pair, next_side);
        walk.push(CircuitEdge {
            pair,
            side: next_side,
        });
        let flipped = match next_side {
            Side::Surplus => Side::Deficit,
            Side::Deficit => Side::Surplus,
        };
        extend_walk(rest, walk, start, pair.other(at), flipped, out);
        walk.pop();
        rest.put(pair, next_side);
    }
}

/// Maximum number of circuits in a partition of `state`, or `None` when
/// no partition exists.
fn max_circuit_count(state: &DiffState, memo: &mut HashMap<Vec<u8>, Option<usize>>) -> Option<usize> {
    if state.total() == 0 {
        return Some(0);
    }
    let key = state.key();
    if let Some(&cached) = memo.get(&key) {
        return cached;
    }
    let mut best: Option<usize> = None;
    for circuit in circuits_through_anchor(state) {
        let mut rest = state.clone();
        for edge in &circuit {
            rest.take(edge.pair, edge.side);
        }
        if let Some(sub) = max_circuit_count(&rest, memo) {
            let total = sub + 1;
            if best.map_or(true, |b| total > b) {
                best = Some(total);
            }
        }
    }
    memo.insert(key, best);
    best
}

/// Recovers a maximum partition by committing anchor circuits whose
/// remainder still attains the optimum.
fn max_partition(state: &DiffState, memo: &mut HashMap<Vec<u8>, Option<usize>>) -> SymmetricCircuitPartition {
    let mut circuits = Vec::new();
    let mut cur = state.clone();
    while cur.total() > 0 {
        let want = max_circuit_count(&cur, memo).expect("partition exists");
        let mut advanced = false;
        for circuit in circuits_through_anchor(&cur) {
            let mut rest = cur.clone();
            for edge in &circuit {
                rest.take(edge.pair, edge.side);
            }
            if max_circuit_count(&rest, memo) == Some(want - 1) {
                circuits.push(circuit);
                cur = rest;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "optimal circuit extraction must advance");
    }
    SymmetricCircuitPartition { circuits }
}

/// Shortest alternating circuit through the anchor edge.
fn shortest_anchor_circuit(state: &DiffState) -> Option<Vec<CircuitEdge>> {
    circuits_through_anchor(state)
        .into_iter()
        .min_by_key(|c| c.len())
}

fn diff_state(g: &Multigraph, h: &Multigraph) -> Result<DiffState> {
    Ok(DiffState {
        surplus: g.minus(h)?.iter().collect(),
        deficit: h.minus(g)?.iter().collect(),
    })
}

/// `psi(G, H) = delta / 2 - m` together with the witnessing circuit
/// partition. In exact mode `m` is maximal and the value equals the
/// unconstrained flip distance; greedy mode merely reports a valid
/// partition's value.
pub fn psi(
    g: &Multigraph,
    h: &Multigraph,
    mode: PsiMode,
) -> Result<(usize, SymmetricCircuitPartition)> {
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::SizeMismatch(g.vertex_count(), h.vertex_count()));
    }
    for v in 0..g.vertex_count() {
        if g.degree(v) != h.degree(v) {
            return Err(Error::DegreeMismatch(v));
        }
    }
    let delta = g.delta(h)?;
    if delta == 0 {
        return Ok((0, SymmetricCircuitPartition::default()));
    }
    let state = diff_state(g, h)?;
    let partition = match mode {
        PsiMode::Exact => {
            if delta > PSI_EXACT_CAP {
                return Err(Error::TooLarge(format!(
                    "delta {delta} exceeds the exact-psi cap {PSI_EXACT_CAP}"
                )));
            }
            let mut memo = HashMap::new();
            if max_circuit_count(&state, &mut memo).is_none() {
                return Err(Error::PreconditionViolated(
                    "symmetric difference admits no circuit partition".into(),
                ));
            }
            max_partition(&state, &mut memo)
        }
        PsiMode::Greedy => {
            let mut circuits = Vec::new();
            let mut cur = state;
            while cur.total() > 0 {
                let circuit = shortest_anchor_circuit(&cur).ok_or_else(|| {
                    Error::PreconditionViolated(
                        "symmetric difference admits no circuit partition".into(),
                    )
                })?;
                for edge in &circuit {
                    cur.take(edge.pair, edge.side);
                }
                circuits.push(circuit);
            }
            SymmetricCircuitPartition { circuits }
        }
    };
    partition.validate(g, h)?;
    Ok((delta / 2 - partition.count(), partition))
}

/// Caps for the breadth-first searches.
#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    /// Maximum number of stored states across both search frontiers.
    pub max_states: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            max_states: 500_000,
        }
    }
}

/// All graphs reachable from `g` by one valid flip (filtered by fragment
/// correctness when a tree is given).
fn flip_neighbors(g: &Multigraph, tree: Option<&FragmentTree>) -> Vec<Multigraph> {
    let pairs: Vec<VertexPair> = g.edges().map(|(p, _)| p).collect();
    let mut out = Vec::new();
    for (i, &p) in pairs.iter().enumerate() {
        for &q in &pairs[i + 1..] {
            for (a, b) in [(p.small(), p.large()), (p.large(), p.small())] {
                for (c, d) in [(q.small(), q.large()), (q.large(), q.small())] {
                    let Ok(f) = Flip::new(a, b, c, d) else {
                        continue;
                    };
                    let Ok(next) = g.apply_flip(f) else {
                        continue;
                    };
                    if let Some(tree) = tree {
                        if !tree.all_fragments_connected(&next) {
                            continue;
                        }
                    }
                    out.push(next);
                }
            }
        }
    }
    out
}

/// Exact flip distance by bidirectional breadth-first search over the
/// reconfiguration graph: all realizations of the shared degree vector
/// when `cc` is `None`, otherwise the members of the constrained family.
pub fn exact_distance(
    g: &Multigraph,
    h: &Multigraph,
    cc: Option<&NestedCollection>,
) -> Result<usize> {
    exact_distance_with(g, h, cc, DistanceOptions::default())
}

pub fn exact_distance_with(
    g: &Multigraph,
    h: &Multigraph,
    cc: Option<&NestedCollection>,
    opts: DistanceOptions,
) -> Result<usize> {
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::SizeMismatch(g.vertex_count(), h.vertex_count()));
    }
    for v in 0..g.vertex_count() {
        if g.degree(v) != h.degree(v) {
            return Err(Error::DegreeMismatch(v));
        }
    }
    let tree = cc.map(FragmentTree::build);
    if let Some(tree) = &tree {
        let s = g.degree_vector();
        if !tree.check_membership(g, &s) {
            return Err(Error::NotMember("source graph".into()));
        }
        if !tree.check_membership(h, &s) {
            return Err(Error::NotMember("target graph".into()));
        }
    }
    if g == h {
        return Ok(0);
    }
    // Bidirectional breadth-first search; flips are reversible, so the
    // state graph is undirected.
    let mut dist_a: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut dist_b: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut frontier_a = vec![g.clone()];
    let mut frontier_b = vec![h.clone()];
    dist_a.insert(g.canonical_key(), 0);
    dist_b.insert(h.canonical_key(), 0);
    let mut depth_a = 0usize;
    let mut depth_b = 0usize;
    loop {
        if frontier_a.is_empty() || frontier_b.is_empty() {
            return Err(Error::PreconditionViolated(
                "graphs are not connected in the reconfiguration graph".into(),
            ));
        }
        // Expand the smaller frontier.
        let expand_a = frontier_a.len() <= frontier_b.len();
        let (frontier, dist_self, dist_other, depth_self) = if expand_a {
            (&mut frontier_a, &mut dist_a, &dist_b, &mut depth_a)
        } else {
            (&mut frontier_b, &mut dist_b, &dist_a, &mut depth_b)
        };
        let mut next_frontier = Vec::new();
        let mut best_meet: Option<usize> = None;
        for state in frontier.iter() {
            for neighbor in flip_neighbors(state, tree.as_ref()) {
                let key = neighbor.canonical_key();
                if dist_self.contains_key(&key) {
                    continue;
                }
                if let Some(&other_depth) = dist_other.get(&key) {
                    let total = *depth_self + 1 + other_depth;
                    if best_meet.map_or(true, |b| total < b) {
                        best_meet = Some(total);
                    }
                }
                dist_self.insert(key, *depth_self + 1);
                next_frontier.push(neighbor);
            }
        }
        if let Some(found) = best_meet {
            return Ok(found);
        }
        *depth_self += 1;
        *frontier = next_frontier;
        if dist_a.len() + dist_b.len() > opts.max_states {
            return Err(Error::TooLarge(format!(
                "breadth-first search exceeded {} states",
                opts.max_states
            )));
        }
    }
}

/// Exhaustive enumeration of the constrained family by depth-first flip
/// traversal from a constructed seed, deduplicated on canonical keys.
/// Emits each member exactly once; the delay between outputs is one
/// neighbor expansion.
pub struct Enumeration {
    tree: FragmentTree,
    stack: Vec<Multigraph>,
    visited: HashSet<Vec<u8>>,
}

impl Iterator for Enumeration {
    type Item = Multigraph;

    fn next(&mut self) -> Option<Multigraph> {
        let state = self.stack.pop()?;
        for neighbor in flip_neighbors(&state, Some(&self.tree)) {
            let key = neighbor.canonical_key();
            if self.visited.insert(key) {
                self.stack.push(neighbor);
            }
        }
        Some(state)
    }
}

/// Streams every member of the constrained family exactly once, starting
/// from a constructed realization.
pub fn enumerate(s: &DegreeVector, cc: &NestedCollection) -> Result<Enumeration> {
    let seed = realize::realize(s, cc)?;
    let tree = FragmentTree::build(cc);
    let mut visited = HashSet::new();
    visited.insert(seed.canonical_key());
    Ok(Enumeration {
        tree,
        stack: vec![seed],
        visited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn g(n: usize, pairs: &[(usize, usize)]) -> Multigraph {
        Multigraph::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn psi_of_equal_graphs_is_zero() {
        let a = g(3, &[(0, 1), (1, 2)]);
        let (value, partition) = psi(&a, &a, PsiMode::Exact).unwrap();
        assert_eq!(value, 0);
        assert_eq!(partition.count(), 0);
    }

    #[test]
    fn psi_of_path_pair_is_one() {
        // delta = 4, one alternating 4-circuit, so psi = 1 = BFS distance.
        let a = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = g(4, &[(0, 2), (1, 2), (1, 3)]);
        let (value, partition) = psi(&a, &b, PsiMode::Exact).unwrap();
        assert_eq!(value, 1);
        assert_eq!(partition.count(), 1);
        assert_eq!(exact_distance(&a, &b, None).unwrap(), 1);
    }

    #[test]
    fn psi_of_doubled_instance_is_two() {
        // Two disjoint alternating 4-circuits.
        let a = g(8, &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]);
        let b = g(8, &[(0, 2), (1, 2), (1, 3), (4, 6), (5, 6), (5, 7)]);
        let (value, partition) = psi(&a, &b, PsiMode::Exact).unwrap();
        assert_eq!(partition.count(), 2);
        assert_eq!(value, 8 / 2 - 2);
        assert_eq!(exact_distance(&a, &b, None).unwrap(), 2);
    }

    #[test]
    fn greedy_partitions_are_valid() {
        let a = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = g(4, &[(0, 2), (1, 2), (1, 3)]);
        let (value, partition) = psi(&a, &b, PsiMode::Greedy).unwrap();
        partition.validate(&a, &b).unwrap();
        assert!(value >= 1);
    }

    #[test]
    fn exact_cap_is_enforced() {
        // Build graphs with a symmetric difference beyond the cap.
        let mut a = Multigraph::empty(20);
        let mut b = Multigraph::empty(20);
        for i in 0..10 {
            a.add_edge_mult(2 * i % 20, (2 * i + 1) % 20, 1).unwrap();
            b.add_edge_mult(2 * i % 20, (2 * i + 2) % 20, 1).unwrap();
        }
        if a.degree_vector() == b.degree_vector() && a.delta(&b).unwrap() > PSI_EXACT_CAP {
            assert!(matches!(
                psi(&a, &b, PsiMode::Exact),
                Err(Error::TooLarge(_))
            ));
        }
    }

    #[test]
    fn bfs_distance_on_constrained_family() {
        let a = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = g(4, &[(0, 2), (1, 2), (1, 3)]);
        let cc = NestedCollection::trivial(4);
        assert_eq!(exact_distance(&a, &a, Some(&cc)).unwrap(), 0);
        assert_eq!(exact_distance(&a, &b, Some(&cc)).unwrap(), 1);
    }

    #[test]
    fn bfs_rejects_non_members() {
        let a = g(4, &[(0, 1), (2, 3)]);
        let cc = NestedCollection::trivial(4);
        assert!(matches!(
            exact_distance(&a, &a, Some(&cc)),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn enumerate_single_edge() {
        let s = DegreeVector::new(vec![1, 1]);
        let cc = NestedCollection::trivial(2);
        let found: Vec<Multigraph> = enumerate(&s, &cc).unwrap().collect();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].multiplicity(0, 1), 1);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        let cases: Vec<(Vec<usize>, Vec<Vec<usize>>)> = vec![
            (vec![2, 2, 2], vec![]),
            (vec![2, 1, 1, 2], vec![vec![0, 1]]),
            (vec![2, 2, 2, 2], vec![]),
            (vec![3, 2, 2, 1], vec![vec![2, 3]]),
        ];
        for (degs, sets) in cases {
            let n = degs.len();
            let s = DegreeVector::new(degs);
            let cc = NestedCollection::validate_and_normalize(&sets, n).unwrap();
            let expected: HashSet<Vec<u8>> = oracle::members(&s, &cc, 4)
                .unwrap()
                .into_iter()
                .map(|g| g.canonical_key())
                .collect();
            let found: Vec<Multigraph> = enumerate(&s, &cc).unwrap().collect();
            let keys: HashSet<Vec<u8>> = found.iter().map(|g| g.canonical_key()).collect();
            assert_eq!(keys.len(), found.len(), "duplicate emission");
            assert_eq!(keys, expected, "enumeration mismatch for {s:?}");
        }
    }

    #[test]
    fn enumerate_rejects_unrealizable() {
        let s = DegreeVector::new(vec![1, 1, 1]);
        let cc = NestedCollection::trivial(3);
        assert!(matches!(enumerate(&s, &cc), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn unconstrained_distance_matches_psi_on_samples() {
        // A handful of fixed pairs with delta <= 8.
        let pairs = vec![
            (
                g(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
                g(5, &[(0, 2), (1, 2), (1, 3), (3, 4)]),
            ),
            (
                g(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
                g(5, &[(0, 3), (1, 2), (1, 3), (2, 4)]),
            ),
            (
                Multigraph::from_edges(4, &[(0, 1, 2), (2, 3, 2)]).unwrap(),
                Multigraph::from_edges(4, &[(0, 2, 2), (1, 3, 2)]).unwrap(),
            ),
        ];
        for (a, b) in pairs {
            if a.degree_vector() != b.degree_vector() {
                continue;
            }
            let (value, _) = psi(&a, &b, PsiMode::Exact).unwrap();
            let bfs = exact_distance(&a, &b, None).unwrap();
            assert_eq!(value, bfs, "psi disagrees with BFS for {a} vs {b}");
        }
    }
}
