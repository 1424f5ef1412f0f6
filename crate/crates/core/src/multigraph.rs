//! Loop-free multigraphs on labeled vertices with flips and multiset
//! edge algebra.
//!
//! Edges are unordered pairs of distinct vertices carrying a positive
//! multiplicity. All iteration is in sorted pair order so that every
//! algorithm downstream is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Vertex label, `0..n`.
pub type Vertex = usize;

/// Unordered pair of distinct vertices, stored smaller-first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPair {
    a: Vertex,
    b: Vertex,
}

impl VertexPair {
    /// Builds a pair, rejecting loops.
    pub fn new(u: Vertex, v: Vertex) -> Result<Self> {
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        Ok(Self {
            a: u.min(v),
            b: u.max(v),
        })
    }

    pub fn small(&self) -> Vertex {
        self.a
    }

    pub fn large(&self) -> Vertex {
        self.b
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(&self, v: Vertex) -> Vertex {
        if v == self.a {
            self.b
        } else {
            debug_assert_eq!(v, self.b);
            self.a
        }
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Per-vertex prescribed degrees. Realization is per labeled vertex, not
/// up to reordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeVector(pub Vec<usize>);

impl DegreeVector {
    pub fn new(degrees: Vec<usize>) -> Self {
        Self(degrees)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Vertex) -> usize {
        self.0[v]
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

/// The flip `(ab, cd) -> (ac, bd)`: remove one copy each of `ab` and `cd`,
/// add one copy each of `ac` and `bd`. Shared endpoints between the two
/// source edges (`b = c` or `a = d`) are allowed since no loop arises;
/// `a = c` or `b = d` would create a loop and is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flip {
    pub a: Vertex,
    pub b: Vertex,
    pub c: Vertex,
    pub d: Vertex,
}

impl Flip {
    pub fn new(a: Vertex, b: Vertex, c: Vertex, d: Vertex) -> Result<Self> {
        if a == b {
            return Err(Error::LoopEdge(a));
        }
        if c == d {
            return Err(Error::LoopEdge(c));
        }
        if a == c || b == d {
            return Err(Error::LoopCreation);
        }
        Ok(Self { a, b, c, d })
    }

    /// Source pairs `(ab, cd)`.
    pub fn sources(&self) -> (VertexPair, VertexPair) {
        (
            VertexPair::new(self.a, self.b).expect("flip invariant"),
            VertexPair::new(self.c, self.d).expect("flip invariant"),
        )
    }

    /// Created pairs `(ac, bd)`.
    pub fn targets(&self) -> (VertexPair, VertexPair) {
        (
            VertexPair::new(self.a, self.c).expect("flip invariant"),
            VertexPair::new(self.b, self.d).expect("flip invariant"),
        )
    }

    /// The flip undoing this one: `(ac, bd) -> (ab, cd)`.
    pub fn reversed(&self) -> Flip {
        // Sources (ac, bd), targets (ab, cd); the invariants of the
        // original flip carry over.
        Flip {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }
}

impl fmt::Display for Flip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{}, {}{}) -> ({}{}, {}{})",
            self.a, self.b, self.c, self.d, self.a, self.c, self.b, self.d
        )
    }
}

/// Whether a recorded flip was emitted as-is or is the inversion of a flip
/// originally computed on the target side of a transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipDirection {
    Forward,
    Backward,
}

/// An ordered, sequentially applicable list of flips.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlipSequence {
    steps: Vec<(Flip, FlipDirection)>,
}

impl FlipSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, flip: Flip, direction: FlipDirection) {
        self.steps.push((flip, direction));
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Flip, FlipDirection)> {
        self.steps.iter()
    }

    pub fn flips(&self) -> impl Iterator<Item = Flip> + '_ {
        self.steps.iter().map(|(f, _)| *f)
    }

    /// Replays the sequence on `g`, returning the final graph.
    pub fn apply_to(&self, g: &Multigraph) -> Result<Multigraph> {
        let mut cur = g.clone();
        for (flip, _) in &self.steps {
            cur = cur.apply_flip(*flip)?;
        }
        Ok(cur)
    }

    /// Replays the sequence on `g`, returning every intermediate graph
    /// including the start and the end.
    pub fn trajectory(&self, g: &Multigraph) -> Result<Vec<Multigraph>> {
        let mut out = vec![g.clone()];
        for (flip, _) in &self.steps {
            let next = out.last().unwrap().apply_flip(*flip)?;
            out.push(next);
        }
        Ok(out)
    }
}

impl FromIterator<Flip> for FlipSequence {
    fn from_iter<I: IntoIterator<Item = Flip>>(iter: I) -> Self {
        Self {
            steps: iter
                .into_iter()
                .map(|f| (f, FlipDirection::Forward))
                .collect(),
        }
    }
}

/// A multiset of vertex pairs, the result of the edge algebra operations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeMultiset(BTreeMap<VertexPair, usize>);

impl EdgeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pair: VertexPair, count: usize) {
        if count > 0 {
            *self.0.entry(pair).or_insert(0) += count;
        }
    }

    pub fn multiplicity(&self, pair: VertexPair) -> usize {
        self.0.get(&pair).copied().unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct pairs in sorted order with their multiplicities.
    pub fn iter(&self) -> impl Iterator<Item = (VertexPair, usize)> + '_ {
        self.0.iter().map(|(&p, &m)| (p, m))
    }

    /// Pairs repeated by multiplicity, in sorted order.
    pub fn occurrences(&self) -> impl Iterator<Item = VertexPair> + '_ {
        self.0
            .iter()
            .flat_map(|(&p, &m)| std::iter::repeat(p).take(m))
    }
}

impl FromIterator<(VertexPair, usize)> for EdgeMultiset {
    fn from_iter<I: IntoIterator<Item = (VertexPair, usize)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (p, m) in iter {
            out.insert(p, m);
        }
        out
    }
}

/// A loop-free multigraph on vertices `0..n`.
///
/// Pairs with multiplicity zero are never stored; the empty graph on zero
/// vertices is valid and connected by convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    mult: BTreeMap<VertexPair, usize>,
    degrees: Vec<usize>,
}

impl Multigraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            mult: BTreeMap::new(),
            degrees: vec![0; n],
        }
    }

    /// Builds a graph from `(u, v, multiplicity)` triples. Duplicate pairs
    /// accumulate. Zero-multiplicity triples are ignored.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v, m) in edges {
            if m == 0 {
                continue;
            }
            g.add_edge_mult(u, v, m)?;
        }
        Ok(g)
    }

    /// Convenience constructor for unit-multiplicity edge lists.
    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let triples: Vec<_> = pairs.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::from_edges(n, &triples)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Total edge multiplicity.
    pub fn edge_count(&self) -> usize {
        self.mult.values().sum()
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange(v, self.n));
        }
        Ok(())
    }

    pub(crate) fn add_edge_mult(&mut self, u: Vertex, v: Vertex, m: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let pair = VertexPair::new(u, v)?;
        let slot = self.mult.entry(pair).or_insert(0);
        *slot = slot
            .checked_add(m)
            .ok_or(Error::Overflow(pair.small(), pair.large()))?;
        self.degrees[u] += m;
        self.degrees[v] += m;
        Ok(())
    }

    pub(crate) fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.add_edge_mult(u, v, 1)
    }

    /// Removes one copy of `uv`.
    pub(crate) fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let pair = VertexPair::new(u, v)?;
        match self.mult.get_mut(&pair) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                self.mult.remove(&pair);
            }
            None => return Err(Error::MissingEdge(pair.small(), pair.large())),
        }
        self.degrees[u] -= 1;
        self.degrees[v] -= 1;
        Ok(())
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        match VertexPair::new(u, v) {
            Ok(pair) => self.mult.get(&pair).copied().unwrap_or(0),
            Err(_) => 0,
        }
    }

    pub fn multiplicity_of(&self, pair: VertexPair) -> usize {
        self.mult.get(&pair).copied().unwrap_or(0)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degrees[v]
    }

    pub fn degree_vector(&self) -> DegreeVector {
        DegreeVector(self.degrees.clone())
    }

    /// Distinct pairs in sorted order with multiplicities.
    pub fn edges(&self) -> impl Iterator<Item = (VertexPair, usize)> + '_ {
        self.mult.iter().map(|(&p, &m)| (p, m))
    }

    /// Edge occurrences (pairs repeated by multiplicity) in sorted order.
    pub fn edge_occurrences(&self) -> impl Iterator<Item = VertexPair> + '_ {
        self.mult
            .iter()
            .flat_map(|(&p, &m)| std::iter::repeat(p).take(m))
    }

    pub fn edge_multiset(&self) -> EdgeMultiset {
        EdgeMultiset(self.mult.clone())
    }

    /// Neighbors of `v` (each distinct neighbor once) in sorted order.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .mult
            .keys()
            .filter(|p| p.contains(v))
            .map(|p| p.other(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Applies `(ab, cd) -> (ac, bd)`, returning the new graph.
    pub fn apply_flip(&self, f: Flip) -> Result<Multigraph> {
        for v in [f.a, f.b, f.c, f.d] {
            self.check_vertex(v)?;
        }
        // Re-validate the flip invariants so raw struct literals cannot
        // smuggle in loops.
        let f = Flip::new(f.a, f.b, f.c, f.d)?;
        let (s1, s2) = f.sources();
        if self.multiplicity_of(s1) == 0 {
            return Err(Error::MissingEdge(s1.small(), s1.large()));
        }
        // With s1 = s2 a single copy cannot be removed twice.
        if s1 == s2 {
            if self.multiplicity_of(s1) < 2 {
                return Err(Error::MissingEdge(s2.small(), s2.large()));
            }
        } else if self.multiplicity_of(s2) == 0 {
            return Err(Error::MissingEdge(s2.small(), s2.large()));
        }
        let mut out = self.clone();
        out.remove_edge(f.a, f.b)?;
        out.remove_edge(f.c, f.d)?;
        out.add_edge(f.a, f.c)?;
        out.add_edge(f.b, f.d)?;
        Ok(out)
    }

    /// True iff the subgraph induced by `subset` is connected. Empty and
    /// singleton subsets are connected by convention.
    pub fn is_connected_subset(&self, subset: &[Vertex]) -> bool {
        if subset.len() <= 1 {
            return true;
        }
        let mut in_set = vec![false; self.n];
        for &v in subset {
            if v >= self.n {
                return false;
            }
            in_set[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![subset[0]];
        seen[subset[0]] = true;
        let mut found = 1;
        while let Some(v) = stack.pop() {
            for (pair, _) in self.mult.iter() {
                if pair.contains(v) {
                    let u = pair.other(v);
                    if in_set[u] && !seen[u] {
                        seen[u] = true;
                        found += 1;
                        stack.push(u);
                    }
                }
            }
        }
        found == subset.len()
    }

    /// True iff the whole graph is connected (vacuously for `n <= 1`).
    pub fn is_connected(&self) -> bool {
        let all: Vec<Vertex> = (0..self.n).collect();
        self.is_connected_subset(&all)
    }

    /// Per-pair `|mult_G - mult_H|` together with its total size
    /// `delta(G, H)`.
    pub fn symmetric_difference(&self, other: &Multigraph) -> Result<(EdgeMultiset, usize)> {
        self.check_same_size(other)?;
        let mut out = EdgeMultiset::new();
        for pair in self.all_pairs_with(other) {
            let a = self.multiplicity_of(pair);
            let b = other.multiplicity_of(pair);
            out.insert(pair, a.abs_diff(b));
        }
        let total = out.total();
        Ok((out, total))
    }

    /// `delta(G, H)`, the size of the symmetric difference.
    pub fn delta(&self, other: &Multigraph) -> Result<usize> {
        Ok(self.symmetric_difference(other)?.1)
    }

    /// Per-pair `max(mult_G - mult_H, 0)`.
    pub fn minus(&self, other: &Multigraph) -> Result<EdgeMultiset> {
        self.check_same_size(other)?;
        let mut out = EdgeMultiset::new();
        for (pair, m) in self.edges() {
            let b = other.multiplicity_of(pair);
            if m > b {
                out.insert(pair, m - b);
            }
        }
        Ok(out)
    }

    /// Per-pair `min(mult_G, mult_H)`.
    pub fn intersect(&self, other: &Multigraph) -> Result<EdgeMultiset> {
        self.check_same_size(other)?;
        let mut out = EdgeMultiset::new();
        for (pair, m) in self.edges() {
            let b = other.multiplicity_of(pair);
            out.insert(pair, m.min(b));
        }
        Ok(out)
    }

    fn check_same_size(&self, other: &Multigraph) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        Ok(())
    }

    fn all_pairs_with<'a>(&'a self, other: &'a Multigraph) -> Vec<VertexPair> {
        let mut pairs: Vec<VertexPair> = self
            .mult
            .keys()
            .chain(other.mult.keys())
            .copied()
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Some edge of `pool` lying on a cycle of the graph, or `None`. A pair
    /// of parallel edges counts as a 2-cycle, so any pool pair with
    /// multiplicity at least 2 in the graph qualifies.
    pub fn non_bridge_edge_in(&self, pool: &EdgeMultiset) -> Option<VertexPair> {
        for (pair, _) in pool.iter() {
            let m = self.multiplicity_of(pair);
            if m == 0 {
                continue;
            }
            if m >= 2 {
                return Some(pair);
            }
            // Single copy: on a cycle iff its endpoints stay connected
            // after removing it.
            let mut g = self.clone();
            g.remove_edge(pair.small(), pair.large())
                .expect("pool edge present");
            let comp = g.component_of(pair.small());
            if comp[pair.large()] {
                return Some(pair);
            }
        }
        None
    }

    fn component_of(&self, start: Vertex) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if start >= self.n {
            return seen;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for (pair, _) in self.mult.iter() {
                if pair.contains(v) {
                    let u = pair.other(v);
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        seen
    }

    /// Connected components as sorted lists of vertices, themselves sorted
    /// by smallest member. Isolated vertices form singleton components.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut assigned = vec![false; self.n];
        let mut out = Vec::new();
        for v in 0..self.n {
            if assigned[v] {
                continue;
            }
            let comp = self.component_of(v);
            let members: Vec<Vertex> = (0..self.n).filter(|&u| comp[u]).collect();
            for &u in &members {
                assigned[u] = true;
            }
            out.push(members);
        }
        out
    }

    /// A byte key equal for equal labeled multigraphs, used for state
    /// deduplication. Vertices are labeled, so no isomorphism canonization
    /// is involved.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.mult.len() * 12);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        for (pair, m) in self.mult.iter() {
            out.extend_from_slice(&(pair.small() as u32).to_le_bytes());
            out.extend_from_slice(&(pair.large() as u32).to_le_bytes());
            out.extend_from_slice(&(*m as u32).to_le_bytes());
        }
        out
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.n)?;
        let mut first = true;
        for (pair, m) in self.edges() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{}-{}", pair.small(), pair.large())?;
            } else {
                write!(f, "{}-{}x{}", pair.small(), pair.large(), m)?;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, pairs: &[(usize, usize)]) -> Multigraph {
        Multigraph::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn flip_moves_edges() {
        // {ab, cd} -> {ac, bd}
        let before = g(4, &[(0, 1), (2, 3)]);
        let after = before.apply_flip(Flip::new(0, 1, 2, 3).unwrap()).unwrap();
        assert_eq!(after, g(4, &[(0, 2), (1, 3)]));
    }

    #[test]
    fn flip_decrements_multiplicity() {
        // {ab x2, cd} -> {ab, ac, bd}
        let before = Multigraph::from_edges(4, &[(0, 1, 2), (2, 3, 1)]).unwrap();
        let after = before.apply_flip(Flip::new(0, 1, 2, 3).unwrap()).unwrap();
        assert_eq!(after, g(4, &[(0, 1), (0, 2), (1, 3)]));
    }

    #[test]
    fn flip_rejects_loop_creation() {
        // {ab, ad}, flip (ab, ad): a = c.
        assert_eq!(Flip::new(0, 1, 0, 3), Err(Error::LoopCreation));
        let before = g(4, &[(0, 1), (0, 3)]);
        let raw = Flip {
            a: 0,
            b: 1,
            c: 0,
            d: 3,
        };
        assert_eq!(before.apply_flip(raw), Err(Error::LoopCreation));
    }

    #[test]
    fn flip_requires_source_edges() {
        let before = g(4, &[(0, 1)]);
        assert_eq!(
            before.apply_flip(Flip::new(0, 1, 2, 3).unwrap()),
            Err(Error::MissingEdge(2, 3))
        );
    }

    #[test]
    fn flip_with_shared_endpoint_is_identity() {
        // b = c is allowed and has no effect.
        let before = g(3, &[(0, 1), (1, 2)]);
        let after = before.apply_flip(Flip::new(0, 1, 1, 2).unwrap()).unwrap();
        assert_eq!(after, before);
    }

    #[test]
    fn symmetric_difference_examples() {
        let a = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(a.delta(&a).unwrap(), 0);
        let b = g(4, &[(0, 2), (1, 2), (1, 3)]);
        let (diff, delta) = a.symmetric_difference(&b).unwrap();
        assert_eq!(delta, 4);
        let expected: EdgeMultiset = [
            (VertexPair::new(0, 1).unwrap(), 1),
            (VertexPair::new(2, 3).unwrap(), 1),
            (VertexPair::new(0, 2).unwrap(), 1),
            (VertexPair::new(1, 3).unwrap(), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(diff, expected);
    }

    #[test]
    fn symmetric_difference_with_multiplicities() {
        let a = Multigraph::from_edges(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 2), (3, 0, 1)]).unwrap();
        let b = Multigraph::from_edges(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]).unwrap();
        let (diff, delta) = a.symmetric_difference(&b).unwrap();
        assert_eq!(delta, 4);
        assert_eq!(diff.multiplicity(VertexPair::new(0, 1).unwrap()), 1);
        assert_eq!(diff.multiplicity(VertexPair::new(1, 2).unwrap()), 1);
        assert_eq!(diff.multiplicity(VertexPair::new(2, 3).unwrap()), 1);
        assert_eq!(diff.multiplicity(VertexPair::new(0, 3).unwrap()), 1);
    }

    #[test]
    fn minus_and_intersect() {
        let a = Multigraph::from_edges(2, &[(0, 1, 3)]).unwrap();
        let b = Multigraph::from_edges(2, &[(0, 1, 1)]).unwrap();
        let pair = VertexPair::new(0, 1).unwrap();
        assert_eq!(a.minus(&b).unwrap().multiplicity(pair), 2);
        assert_eq!(a.intersect(&b).unwrap().multiplicity(pair), 1);

        let c = g(4, &[(0, 1)]);
        let d = g(4, &[(2, 3)]);
        assert!(c.intersect(&d).unwrap().is_empty());

        assert!(c.minus(&c).unwrap().is_empty());
        assert_eq!(c.intersect(&c).unwrap(), c.edge_multiset());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let a = Multigraph::empty(2);
        let b = Multigraph::empty(3);
        assert_eq!(a.delta(&b), Err(Error::SizeMismatch(2, 3)));
    }

    #[test]
    fn connectivity_of_subsets() {
        let path = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(path.is_connected_subset(&[0, 1, 2, 3]));
        assert!(!path.is_connected_subset(&[0, 2]));
        assert!(path.is_connected_subset(&[1]));
        assert!(path.is_connected_subset(&[]));
        assert!(Multigraph::empty(0).is_connected());
        assert!(!g(4, &[(0, 1), (2, 3)]).is_connected());
    }

    #[test]
    fn non_bridge_edges() {
        let triangle = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(triangle
            .non_bridge_edge_in(&triangle.edge_multiset())
            .is_some());

        let tree = g(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(tree.non_bridge_edge_in(&tree.edge_multiset()), None);

        let parallel = Multigraph::from_edges(2, &[(0, 1, 2)]).unwrap();
        let pool: EdgeMultiset = [(VertexPair::new(0, 1).unwrap(), 1)].into_iter().collect();
        assert_eq!(
            parallel.non_bridge_edge_in(&pool),
            Some(VertexPair::new(0, 1).unwrap())
        );
    }

    #[test]
    fn canonical_keys() {
        let a = g(4, &[(0, 1), (2, 3)]);
        let b = g(4, &[(2, 3), (0, 1)]);
        assert_eq!(a.canonical_key(), b.canonical_key());

        let c = Multigraph::from_edges(4, &[(0, 1, 2)]).unwrap();
        let d = Multigraph::from_edges(4, &[(0, 1, 1)]).unwrap();
        assert_ne!(c.canonical_key(), d.canonical_key());

        assert_eq!(
            Multigraph::empty(3).canonical_key(),
            Multigraph::empty(3).canonical_key()
        );
        assert_ne!(
            Multigraph::empty(3).canonical_key(),
            Multigraph::empty(4).canonical_key()
        );
    }

    #[test]
    fn overflow_is_detected() {
        let mut a = Multigraph::from_edges(2, &[(0, 1, usize::MAX)]).unwrap();
        assert_eq!(a.add_edge(0, 1), Err(Error::Overflow(0, 1)));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn graph_on(n: usize) -> impl Strategy<Value = Multigraph> {
            proptest::collection::vec((0usize..7, 0usize..7, 1usize..3), 0..10).prop_map(
                move |triples| {
                    let mut g = Multigraph::empty(n);
                    for (u, v, m) in triples {
                        let (u, v) = (u % n, v % n);
                        if u != v {
                            g.add_edge_mult(u, v, m).unwrap();
                        }
                    }
                    g
                },
            )
        }

        fn arb_graph() -> impl Strategy<Value = Multigraph> {
            (2usize..7).prop_flat_map(graph_on)
        }

        /// Two graphs on a shared vertex count.
        fn arb_graph_pair() -> impl Strategy<Value = (Multigraph, Multigraph)> {
            (2usize..7).prop_flat_map(|n| (graph_on(n), graph_on(n)))
        }

        fn valid_flips(g: &Multigraph) -> Vec<Flip> {
            let occ: Vec<VertexPair> = g.edges().map(|(p, _)| p).collect();
            let mut out = Vec::new();
            for &p in &occ {
                for &q in &occ {
                    for (a, b) in [(p.small(), p.large()), (p.large(), p.small())] {
                        for (c, d) in [(q.small(), q.large()), (q.large(), q.small())] {
                            if let Ok(f) = Flip::new(a, b, c, d) {
                                if g.apply_flip(f).is_ok() {
                                    out.push(f);
                                }
                            }
                        }
                    }
                }
            }
            out
        }

        proptest! {
            #[test]
            fn flips_preserve_degrees(g in arb_graph()) {
                for f in valid_flips(&g) {
                    let h = g.apply_flip(f).unwrap();
                    prop_assert_eq!(h.degree_vector(), g.degree_vector());
                }
            }

            #[test]
            fn flips_are_reversible(g in arb_graph()) {
                for f in valid_flips(&g) {
                    let h = g.apply_flip(f).unwrap();
                    let back = h.apply_flip(f.reversed()).unwrap();
                    prop_assert_eq!(&back, &g);
                }
            }

            #[test]
            fn delta_is_a_metric_like_quantity((a, b) in arb_graph_pair()) {
                let d_ab = a.delta(&b).unwrap();
                let d_ba = b.delta(&a).unwrap();
                prop_assert_eq!(d_ab, d_ba);
                prop_assert_eq!(d_ab == 0, a == b);
                if a.degree_vector() == b.degree_vector() {
                    prop_assert_eq!(d_ab % 2, 0);
                }
            }

            #[test]
            fn edge_algebra_partition((a, b) in arb_graph_pair()) {
                // E(G) = E(G cap H) + E(G - H) as multisets.
                let inter = a.intersect(&b).unwrap();
                let minus = a.minus(&b).unwrap();
                for (pair, m) in a.edges() {
                    prop_assert_eq!(inter.multiplicity(pair) + minus.multiplicity(pair), m);
                }
                prop_assert_eq!(inter.total() + minus.total(), a.edge_count());
            }

            #[test]
            fn single_flip_changes_delta_by_small_even_amount((a, b) in arb_graph_pair()) {
                let before = a.delta(&b).unwrap() as i64;
                for f in valid_flips(&a) {
                    let after = a.apply_flip(f).unwrap().delta(&b).unwrap() as i64;
                    prop_assert!([-4, -2, 0, 2, 4].contains(&(after - before)));
                }
            }
        }
    }
}
