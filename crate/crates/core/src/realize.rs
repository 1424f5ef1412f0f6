//! Realizability of a degree vector under nested connectivity constraints
//! and construction of realizations.
//!
//! For every fragment `C` the achievable degree-deficits (endpoints of
//! edges leaving `C`) of graphs coherent on `C` form the interval
//! `[ell(C), u(C)]` of a fixed parity. `u` counts the degree budget left
//! after spending `2(|C| - 1)` endpoints on an inner spanning structure;
//! `ell` propagates bottom-up how much budget a child can be forced to
//! keep unmatched by its siblings. A full realization exists iff every
//! proper fragment can afford at least one crossing edge (`u >= 1`) and
//! the root can close exactly (`ell(V) = 0 <= u(V)`).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fragments::{FragmentTree, NestedCollection, NodeId};
use crate::multigraph::{DegreeVector, Multigraph, Vertex, VertexPair};

/// Per-node deficit bounds, indexed by fragment-tree node id.
#[derive(Debug, Clone)]
pub struct NodeBounds {
    pub u: Vec<i64>,
    pub ell: Vec<i64>,
    /// Internal nodes only.
    pub phi: Vec<Option<i64>>,
}

impl NodeBounds {
    pub fn u(&self, node: NodeId) -> i64 {
        self.u[node]
    }

    pub fn ell(&self, node: NodeId) -> i64 {
        self.ell[node]
    }

    pub fn phi(&self, node: NodeId) -> Option<i64> {
        self.phi[node]
    }
}

/// Why an instance is not realizable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A proper fragment cannot afford a crossing edge: `u(C) < 1`.
    FragmentUpperBound {
        node: NodeId,
        vertices: Vec<Vertex>,
        u: i64,
    },
    /// The root cannot close exactly: `ell(V) > 0`.
    RootLowerBound { ell: i64 },
    /// The root budget is negative: `u(V) < 0`.
    RootUpperBound { u: i64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::FragmentUpperBound { vertices, u, .. } => {
                write!(f, "u({vertices:?}) = {u} < 1")
            }
            Violation::RootLowerBound { ell } => write!(f, "ell(V) = {ell} != 0"),
            Violation::RootUpperBound { u } => write!(f, "u(V) = {u} < 0"),
        }
    }
}

/// Outcome of the realizability decision together with the witness bounds.
#[derive(Debug, Clone)]
pub struct RealizabilityReport {
    pub realizable: bool,
    pub violation: Option<Violation>,
    pub bounds: NodeBounds,
}

/// Evaluates `u`, `ell`, and `phi` bottom-up over the fragment tree.
///
/// `phi(C)` maximizes, over the children `C_j`, the lower bound `ell(C_j)`
/// minus the budget `sum of u(C_i)` of the other children; exactly the
/// maximizing child is excluded from the sum (smallest child first on
/// ties).
pub fn compute_bounds(tree: &FragmentTree, s: &DegreeVector) -> Result<NodeBounds> {
    if s.len() != tree.vertex_count() {
        return Err(Error::SizeMismatch(s.len(), tree.vertex_count()));
    }
    let count = tree.node_count();
    let mut u = vec![0i64; count];
    let mut ell = vec![0i64; count];
    let mut phi = vec![None; count];
    let mut order: Vec<NodeId> = (0..count).collect();
    order.sort_by_key(|&id| std::cmp::Reverse(tree.node(id).depth()));
    for id in order {
        let node = tree.node(id);
        let degree_sum: i64 = node.vertices().iter().map(|&v| s.get(v) as i64).sum();
        let size = node.vertices().len() as i64;
        u[id] = degree_sum - (2 * size - 2);
        if node.is_leaf() {
            ell[id] = degree_sum;
            continue;
        }
        let children = node.children();
        let total_u: i64 = children.iter().map(|&ch| u[ch]).sum();
        let best = children
            .iter()
            .map(|&ch| ell[ch] - (total_u - u[ch]))
            .max()
            .expect("internal node has children");
        phi[id] = Some(best);
        ell[id] = if best >= 0 {
            best
        } else if best % 2 == 0 {
            0
        } else {
            1
        };
    }
    Ok(NodeBounds { u, ell, phi })
}

/// Decides whether some loop-free multigraph realizes `s` with every set
/// of `cc` inducing a connected subgraph. On failure the report names the
/// violated condition and fragment.
pub fn is_realizable(s: &DegreeVector, cc: &NestedCollection) -> Result<RealizabilityReport> {
    if s.len() != cc.vertex_count() {
        return Err(Error::SizeMismatch(s.len(), cc.vertex_count()));
    }
    let tree = FragmentTree::build(cc);
    if tree.vertex_count() == 0 {
        return Ok(RealizabilityReport {
            realizable: true,
            violation: None,
            bounds: NodeBounds {
                u: vec![0],
                ell: vec![0],
                phi: vec![None],
            },
        });
    }
    let bounds = compute_bounds(&tree, s)?;
    // Every fragment other than the root needs at least one crossing
    // edge, so u(C) >= 1 there; the root must close exactly.
    let mut violation = None;
    for (id, node) in tree.nodes() {
        if id == tree.root() {
            continue;
        }
        if bounds.u[id] < 1 {
            violation = Some(Violation::FragmentUpperBound {
                node: id,
                vertices: node.vertices().iter().copied().collect(),
                u: bounds.u[id],
            });
            break;
        }
    }
    if violation.is_none() {
        let root = tree.root();
        if bounds.u[root] < 0 {
            violation = Some(Violation::RootUpperBound { u: bounds.u[root] });
        } else if bounds.ell[root] != 0 {
            violation = Some(Violation::RootLowerBound {
                ell: bounds.ell[root],
            });
        }
    }
    Ok(RealizabilityReport {
        realizable: violation.is_none(),
        violation,
        bounds,
    })
}

/// A graph on the vertices of a single fragment, every contained fragment
/// connected, degrees bounded by `s`, with the stated total deficit.
#[derive(Debug, Clone)]
pub struct CoherentGraph {
    pub node: NodeId,
    pub graph: Multigraph,
    pub deficit: i64,
}

/// Residual capacity of `v`: prescribed degree minus current degree.
fn capacity(g: &Multigraph, s: &DegreeVector, v: Vertex) -> i64 {
    s.get(v) as i64 - g.degree(v) as i64
}

fn set_deficit(g: &Multigraph, s: &DegreeVector, vertices: &BTreeSet<Vertex>) -> i64 {
    vertices.iter().map(|&v| capacity(g, s, v)).sum()
}

/// Checks the coherence invariants for the subtree rooted at `node`.
fn is_coherent(tree: &FragmentTree, s: &DegreeVector, node: NodeId, g: &Multigraph) -> bool {
    let set = tree.node(node).vertices();
    if set.iter().any(|&v| capacity(g, s, v) < 0) {
        return false;
    }
    // No edge may leave the fragment.
    for (pair, _) in g.edges() {
        if !set.contains(&pair.small()) || !set.contains(&pair.large()) {
            return false;
        }
    }
    tree.subtree(node).into_iter().all(|id| {
        let sub: Vec<Vertex> = tree.node(id).vertices().iter().copied().collect();
        g.is_connected_subset(&sub)
    })
}

fn check_u_preconditions(
    tree: &FragmentTree,
    bounds: &NodeBounds,
    node: NodeId,
) -> Result<()> {
    if bounds.u[node] < 0 {
        return Err(Error::PreconditionViolated(format!(
            "u of node {node} is negative"
        )));
    }
    for id in tree.subtree(node) {
        if id != node && bounds.u[id] < 1 {
            return Err(Error::PreconditionViolated(format!(
                "u of proper sub-fragment {id} is below 1"
            )));
        }
    }
    Ok(())
}

/// Builds a graph coherent on `node` with the maximum deficit `u(node)`:
/// children realized recursively at their own maxima, then joined by
/// exactly `children - 1` crossing edges.
pub fn realize_max_deficit(
    tree: &FragmentTree,
    s: &DegreeVector,
    node: NodeId,
) -> Result<CoherentGraph> {
    let bounds = compute_bounds(tree, s)?;
    check_u_preconditions(tree, &bounds, node)?;
    let graph = max_deficit_inner(tree, s, node)?;
    let deficit = set_deficit(&graph, s, tree.node(node).vertices());
    debug_assert_eq!(deficit, bounds.u[node]);
    debug_assert!(is_coherent(tree, s, node, &graph));
    Ok(CoherentGraph {
        node,
        graph,
        deficit,
    })
}

fn max_deficit_inner(tree: &FragmentTree, s: &DegreeVector, node: NodeId) -> Result<Multigraph> {
    let n = tree.vertex_count();
    if tree.node(node).is_leaf() {
        return Ok(Multigraph::empty(n));
    }
    let children = tree.node(node).children().to_vec();
    let mut g = Multigraph::empty(n);
    for &ch in &children {
        let sub = max_deficit_inner(tree, s, ch)?;
        for (pair, m) in sub.edges() {
            g.add_edge_mult(pair.small(), pair.large(), m)?;
        }
    }
    // Join the children with exactly r - 1 edges: repeatedly connect a
    // component with budget >= 2 to a minimum-budget component.
    let r = children.len();
    let mut comp_of: Vec<usize> = (0..r).collect();
    let mut budget: Vec<i64> = children
        .iter()
        .map(|&ch| set_deficit(&g, s, tree.node(ch).vertices()))
        .collect();
    for _ in 0..r.saturating_sub(1) {
        let comps: BTreeSet<usize> = comp_of.iter().copied().collect();
        // Largest budget first: with more than two components left this is
        // at least 2, keeping every merged budget positive; the final
        // merge may join two budget-1 components and land exactly on
        // deficit u(C).
        let i = comps
            .iter()
            .copied()
            .max_by_key(|&c| (budget[c], std::cmp::Reverse(c)))
            .expect("children remain");
        let needed = if comps.len() > 2 { 2 } else { 1 };
        if budget[i] < needed {
            return Err(Error::PreconditionViolated(format!(
                "cannot connect the children of node {node}: insufficient budget"
            )));
        }
        let j = comps
            .iter()
            .copied()
            .filter(|&c| c != i)
            .min_by_key(|&c| (budget[c], c))
            .expect("at least two components remain");
        let x = smallest_capacity_vertex(tree, s, &g, &children, &comp_of, i)?;
        let y = smallest_capacity_vertex(tree, s, &g, &children, &comp_of, j)?;
        g.add_edge(x, y)?;
        let merged = budget[i] + budget[j] - 2;
        budget[i] = merged;
        for c in comp_of.iter_mut() {
            if *c == j {
                *c = i;
            }
        }
    }
    Ok(g)
}

/// Smallest-labeled vertex with spare capacity inside component `comp`.
fn smallest_capacity_vertex(
    tree: &FragmentTree,
    s: &DegreeVector,
    g: &Multigraph,
    children: &[NodeId],
    comp_of: &[usize],
    comp: usize,
) -> Result<Vertex> {
    children
        .iter()
        .enumerate()
        .filter(|(idx, _)| comp_of[*idx] == comp)
        .flat_map(|(_, &ch)| tree.node(ch).vertices().iter().copied())
        .filter(|&v| capacity(g, s, v) >= 1)
        .min()
        .ok_or_else(|| {
            Error::PreconditionViolated("component has no spare capacity".into())
        })
}

/// An inner edge of fragment `node` whose single-copy removal keeps every
/// fragment of the subtree connected, smallest first.
fn removable_inner_edge(
    tree: &FragmentTree,
    node: NodeId,
    g: &Multigraph,
) -> Option<VertexPair> {
    let set = tree.node(node).vertices();
    let subtree = tree.subtree(node);
    for (pair, _) in g.edges() {
        if !set.contains(&pair.small()) || !set.contains(&pair.large()) {
            continue;
        }
        let mut trial = g.clone();
        trial.remove_edge(pair.small(), pair.large()).ok()?;
        let ok = subtree.iter().all(|&id| {
            let sub: Vec<Vertex> = tree.node(id).vertices().iter().copied().collect();
            trial.is_connected_subset(&sub)
        });
        if ok {
            return Some(pair);
        }
    }
    None
}

/// Builds a graph coherent on `node` with the exact deficit `target`,
/// which must lie in `[ell, u]` and share their parity.
pub fn realize_with_deficit(
    tree: &FragmentTree,
    s: &DegreeVector,
    node: NodeId,
    target: i64,
) -> Result<CoherentGraph> {
    let bounds = compute_bounds(tree, s)?;
    check_u_preconditions(tree, &bounds, node)?;
    if target < bounds.ell[node] || target > bounds.u[node] {
        return Err(Error::PreconditionViolated(format!(
            "target deficit {target} outside [{}, {}]",
            bounds.ell[node], bounds.u[node]
        )));
    }
    if (target - bounds.ell[node]) % 2 != 0 {
        return Err(Error::ParityMismatch);
    }
    let graph = with_deficit_inner(tree, s, &bounds, node, target)?;
    let deficit = set_deficit(&graph, s, tree.node(node).vertices());
    if deficit != target || !is_coherent(tree, s, node, &graph) {
        return Err(Error::PreconditionViolated(format!(
            "construction for node {node} failed validation"
        )));
    }
    Ok(CoherentGraph {
        node,
        graph,
        deficit,
    })
}

fn with_deficit_inner(
    tree: &FragmentTree,
    s: &DegreeVector,
    bounds: &NodeBounds,
    node: NodeId,
    target: i64,
) -> Result<Multigraph> {
    if tree.node(node).is_leaf() {
        // ell = u = prescribed degree; the empty graph is the only
        // coherent graph on a single vertex.
        return Ok(Multigraph::empty(tree.vertex_count()));
    }
    let mut g = max_deficit_inner(tree, s, node)?;
    let mut cur = bounds.u[node];
    let set: Vec<Vertex> = tree.node(node).vertices().iter().copied().collect();
    let children = tree.node(node).children().to_vec();
    let child_sets: Vec<&BTreeSet<Vertex>> =
        children.iter().map(|&ch| tree.node(ch).vertices()).collect();
    let child_of = |v: Vertex| -> Option<usize> {
        child_sets.iter().position(|cs| cs.contains(&v))
    };
    'outer: while cur > target {
        let caps: Vec<Vertex> = set
            .iter()
            .copied()
            .filter(|&v| capacity(&g, s, v) >= 1)
            .collect();
        // Two deficient vertices: join the two smallest labels.
        if caps.len() >= 2 {
            g.add_edge(caps[0], caps[1])?;
            cur -= 2;
            continue;
        }
        let v = *caps.first().ok_or_else(|| {
            Error::PreconditionViolated("deficit left but no capacity vertex".into())
        })?;
        let ci = child_of(v).expect("capacity vertex lies in a child");
        // Re-route a crossing edge avoiding v's child: delete xy between
        // two other children, reconnect both ends through v.
        let crossing: Vec<VertexPair> = g
            .edges()
            .filter(|(p, _)| {
                let (a, b) = (child_of(p.small()), child_of(p.large()));
                matches!((a, b), (Some(x), Some(y)) if x != y)
            })
            .map(|(p, _)| p)
            .collect();
        for &pair in &crossing {
            let (x, y) = (pair.small(), pair.large());
            let (cx, cy) = (child_of(x).unwrap(), child_of(y).unwrap());
            if cx != ci && cy != ci {
                g.remove_edge(x, y)?;
                g.add_edge(v, x)?;
                g.add_edge(v, y)?;
                cur -= 2;
                continue 'outer;
            }
        }
        // Re-route a crossing edge attached to v's child elsewhere than v:
        // replace xy (x in the child) by vy, and spend the freed endpoint
        // on vx.
        for &pair in &crossing {
            for (x, y) in [
                (pair.small(), pair.large()),
                (pair.large(), pair.small()),
            ] {
                if child_of(x) == Some(ci) && x != v && child_of(y) != Some(ci) {
                    g.remove_edge(x, y)?;
                    g.add_edge(v, y)?;
                    g.add_edge(v, x)?;
                    cur -= 2;
                    continue 'outer;
                }
            }
        }
        // A sibling with a removable inner edge: free two endpoints there
        // and attach them to v.
        for (idx, &ch) in children.iter().enumerate() {
            if idx == ci {
                continue;
            }
            if let Some(pair) = removable_inner_edge(tree, ch, &g) {
                g.remove_edge(pair.small(), pair.large())?;
                g.add_edge(v, pair.small())?;
                g.add_edge(v, pair.large())?;
                cur -= 2;
                continue 'outer;
            }
        }
        // Star case: every crossing edge is incident to v and every
        // sibling sits at its maximum deficit. Rebuild v's child two
        // deficit units lower and reattach the crossing edges.
        let ci_set = child_sets[ci].clone();
        let crossing_at_v: Vec<(VertexPair, usize)> = g
            .edges()
            .filter(|(p, _)| ci_set.contains(&p.small()) != ci_set.contains(&p.large()))
            .collect();
        let mut partners: Vec<Vertex> = Vec::new();
        for &(pair, m) in &crossing_at_v {
            let inside = if ci_set.contains(&pair.small()) {
                pair.small()
            } else {
                pair.large()
            };
            if inside != v {
                return Err(Error::PreconditionViolated(
                    "star case reached with a crossing edge not at the deficit vertex".into(),
                ));
            }
            for _ in 0..m {
                partners.push(pair.other(inside));
            }
        }
        let r = partners.len() as i64;
        let s_child = cur + r;
        let sub = with_deficit_inner(tree, s, bounds, children[ci], s_child - 2)?;
        // Splice: drop everything touching the child, then add the new
        // interior and the reattached crossing edges.
        let mut next = Multigraph::empty(tree.vertex_count());
        for (pair, m) in g.edges() {
            if !ci_set.contains(&pair.small()) && !ci_set.contains(&pair.large()) {
                next.add_edge_mult(pair.small(), pair.large(), m)?;
            }
        }
        for (pair, m) in sub.edges() {
            next.add_edge_mult(pair.small(), pair.large(), m)?;
        }
        partners.sort_unstable();
        for w in partners {
            let inside = ci_set
                .iter()
                .copied()
                .find(|&x| capacity(&next, s, x) >= 1)
                .ok_or_else(|| {
                    Error::PreconditionViolated(
                        "rebuilt child lacks capacity for crossing edges".into(),
                    )
                })?;
            next.add_edge(inside, w)?;
        }
        g = next;
        cur -= 2;
    }
    Ok(g)
}

/// Constructs a member of the constrained family, or reports why none
/// exists.
pub fn realize(s: &DegreeVector, cc: &NestedCollection) -> Result<Multigraph> {
    let report = is_realizable(s, cc)?;
    if !report.realizable {
        return Err(Error::NotRealizable(
            report
                .violation
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unknown".into()),
        ));
    }
    let tree = FragmentTree::build(cc);
    if tree.vertex_count() == 0 {
        return Ok(Multigraph::empty(0));
    }
    let built = realize_with_deficit(&tree, s, tree.root(), 0)?;
    debug_assert!(tree.check_membership(&built.graph, s));
    Ok(built.graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn cc(sets: &[&[usize]], n: usize) -> NestedCollection {
        let sets: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
        NestedCollection::validate_and_normalize(&sets, n).unwrap()
    }

    fn node_of(tree: &FragmentTree, vs: &[usize]) -> NodeId {
        let want: BTreeSet<usize> = vs.iter().copied().collect();
        tree.nodes()
            .find(|(_, nd)| *nd.vertices() == want)
            .map(|(id, _)| id)
            .unwrap()
    }

    #[test]
    fn bounds_on_leaves_and_small_roots() {
        // Leaf with degree 3: ell = u = 3.
        let c = cc(&[], 2);
        let tree = FragmentTree::build(&c);
        let s = DegreeVector::new(vec![3, 3]);
        let b = compute_bounds(&tree, &s).unwrap();
        let leaf = tree.leaf_of(0);
        assert_eq!(b.ell(leaf), 3);
        assert_eq!(b.u(leaf), 3);
        // Root: u = 6 - 2 = 4, phi = 3 - 3 = 0, ell = 0.
        assert_eq!(b.u(tree.root()), 4);
        assert_eq!(b.phi(tree.root()), Some(0));
        assert_eq!(b.ell(tree.root()), 0);
    }

    #[test]
    fn bounds_with_inner_fragment() {
        // n = 4, s = (1,1,1,1), fragment {0, 1}: u({0,1}) = 2 - 2 = 0,
        // phi({0,1}) = 1 - 1 = 0, ell = 0; u(V) = 4 - 6 = -2.
        let c = cc(&[&[0, 1]], 4);
        let tree = FragmentTree::build(&c);
        let s = DegreeVector::new(vec![1, 1, 1, 1]);
        let b = compute_bounds(&tree, &s).unwrap();
        let ab = node_of(&tree, &[0, 1]);
        assert_eq!(b.u(ab), 0);
        assert_eq!(b.phi(ab), Some(0));
        assert_eq!(b.ell(ab), 0);
        assert_eq!(b.u(tree.root()), -2);
    }

    #[test]
    fn realizability_examples() {
        // (1, 1): a single edge.
        let r = is_realizable(&DegreeVector::new(vec![1, 1]), &cc(&[], 2)).unwrap();
        assert!(r.realizable);

        // (1, 1, 1): odd sum, u(V) = 3 - 4 = -1.
        let r = is_realizable(&DegreeVector::new(vec![1, 1, 1]), &cc(&[], 3)).unwrap();
        assert!(!r.realizable);
        assert_eq!(r.violation, Some(Violation::RootUpperBound { u: -1 }));

        // (1,1,1,1) with fragment {0,1}: u({0,1}) = 0 violates the
        // crossing-edge condition.
        let r = is_realizable(&DegreeVector::new(vec![1, 1, 1, 1]), &cc(&[&[0, 1]], 4)).unwrap();
        assert!(!r.realizable);
        match r.violation {
            Some(Violation::FragmentUpperBound { vertices, u, .. }) => {
                assert_eq!(vertices, vec![0, 1]);
                assert_eq!(u, 0);
            }
            other => panic!("unexpected violation {other:?}"),
        }

        // (2,1,1,2) with fragment {0,1}: realizable, e.g. {01, 03, 23}.
        let s = DegreeVector::new(vec![2, 1, 1, 2]);
        let family = cc(&[&[0, 1]], 4);
        let r = is_realizable(&s, &family).unwrap();
        assert!(r.realizable);
        assert!(oracle::is_realizable(&s, &family).unwrap());
    }

    #[test]
    fn zero_degree_vertex_inside_a_larger_graph_is_rejected() {
        // Degrees (2, 2, 0): vertex 2 can never join the connected whole.
        let s = DegreeVector::new(vec![2, 2, 0]);
        let family = cc(&[], 3);
        let r = is_realizable(&s, &family).unwrap();
        assert!(!r.realizable);
        assert!(!oracle::is_realizable(&s, &family).unwrap());
    }

    #[test]
    fn single_vertex_instances() {
        assert!(is_realizable(&DegreeVector::new(vec![0]), &cc(&[], 1))
            .unwrap()
            .realizable);
        assert!(!is_realizable(&DegreeVector::new(vec![2]), &cc(&[], 1))
            .unwrap()
            .realizable);
        assert_eq!(
            realize(&DegreeVector::new(vec![0]), &cc(&[], 1)).unwrap(),
            Multigraph::empty(1)
        );
    }

    #[test]
    fn max_deficit_constructions() {
        // Leaf with degree 2: empty graph, deficit 2.
        let family = cc(&[], 3);
        let tree = FragmentTree::build(&family);
        let s = DegreeVector::new(vec![2, 2, 2]);
        let leaf = tree.leaf_of(1);
        let built = realize_max_deficit(&tree, &s, leaf).unwrap();
        assert_eq!(built.deficit, 2);
        assert_eq!(built.graph.edge_count(), 0);

        // Root over (2,2,2): a spanning structure of 2 edges, deficit 2.
        let built = realize_max_deficit(&tree, &s, tree.root()).unwrap();
        assert_eq!(built.deficit, 2);
        assert_eq!(built.graph.edge_count(), 2);
        assert!(built.graph.is_connected());

        // (2,1,1,2) with fragment {0,1} at the root: deficit u(V) = 0 and
        // all fragments connected.
        let s = DegreeVector::new(vec![2, 1, 1, 2]);
        let family = cc(&[&[0, 1]], 4);
        let tree = FragmentTree::build(&family);
        let built = realize_max_deficit(&tree, &s, tree.root()).unwrap();
        assert_eq!(built.deficit, 0);
        assert!(tree.check_membership(&built.graph, &s));
    }

    #[test]
    fn deficit_targets() {
        let family = cc(&[&[0, 1]], 4);
        let tree = FragmentTree::build(&family);
        let s = DegreeVector::new(vec![2, 1, 1, 2]);

        // target = u: same as realize_max_deficit.
        let max = realize_max_deficit(&tree, &s, tree.root()).unwrap();
        let same = realize_with_deficit(&tree, &s, tree.root(), max.deficit).unwrap();
        assert_eq!(same.graph, max.graph);

        // target = 0: a member of the family.
        let zero = realize_with_deficit(&tree, &s, tree.root(), 0).unwrap();
        assert!(tree.check_membership(&zero.graph, &s));

        // Wrong parity: (3, 3) has ell(V) = 0, u(V) = 4, so an odd target
        // is in range but unreachable.
        let family = cc(&[], 2);
        let tree = FragmentTree::build(&family);
        let s = DegreeVector::new(vec![3, 3]);
        assert!(matches!(
            realize_with_deficit(&tree, &s, tree.root(), 1),
            Err(Error::ParityMismatch)
        ));
        for target in [0i64, 2, 4] {
            let built = realize_with_deficit(&tree, &s, tree.root(), target).unwrap();
            assert_eq!(built.deficit, target);
        }
    }

    #[test]
    fn realize_tiny_sequences() {
        // (1, 1): the single edge.
        let g = realize(&DegreeVector::new(vec![1, 1]), &cc(&[], 2)).unwrap();
        assert_eq!(g.multiplicity(0, 1), 1);
        assert_eq!(g.edge_count(), 1);

        // (3, 3): the triple edge is the only loop-free option.
        let g = realize(&DegreeVector::new(vec![3, 3]), &cc(&[], 2)).unwrap();
        assert_eq!(g.multiplicity(0, 1), 3);

        // (2,2,2,2) with fragments {0,1} and {2,3}.
        let s = DegreeVector::new(vec![2, 2, 2, 2]);
        let family = cc(&[&[0, 1], &[2, 3]], 4);
        let g = realize(&s, &family).unwrap();
        let tree = FragmentTree::build(&family);
        assert!(tree.check_membership(&g, &s));

        // Not realizable.
        assert!(matches!(
            realize(&DegreeVector::new(vec![1, 1, 1]), &cc(&[], 3)),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn agrees_with_oracle_on_small_instances() {
        // Every degree vector over n <= 4 with entries <= 3, against the
        // trivial family and one nested fragment.
        for n in 1..=4usize {
            let mut degs = vec![0usize; n];
            loop {
                let s = DegreeVector::new(degs.clone());
                let families: Vec<NestedCollection> = if n >= 3 {
                    vec![
                        NestedCollection::trivial(n),
                        cc(&[&[0, 1]], n),
                    ]
                } else {
                    vec![NestedCollection::trivial(n)]
                };
                for family in &families {
                    let ours = is_realizable(&s, family).unwrap().realizable;
                    let truth = oracle::is_realizable(&s, family).unwrap();
                    assert_eq!(
                        ours, truth,
                        "disagreement on s={degs:?} n={n} cc={family:?}"
                    );
                    if ours {
                        let g = realize(&s, family).unwrap();
                        let tree = FragmentTree::build(family);
                        assert!(tree.check_membership(&g, &s), "bad witness for {degs:?}");
                    }
                }
                // Next degree vector.
                let mut i = 0;
                while i < n {
                    if degs[i] < 3 {
                        degs[i] += 1;
                        break;
                    }
                    degs[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }

    #[test]
    fn lemma_parity_and_sandwich() {
        // For realized graphs, every fragment deficit (= crossing edges)
        // lies within [ell, u], and ell/u share the parity of the degree
        // sum.
        let cases: Vec<(Vec<usize>, NestedCollection)> = vec![
            (vec![2, 2, 2], cc(&[], 3)),
            (vec![2, 1, 1, 2], cc(&[&[0, 1]], 4)),
            (vec![3, 2, 2, 3, 2], cc(&[&[0, 1], &[2, 3]], 5)),
            (vec![2, 2, 2, 2, 4], cc(&[&[0, 1, 2]], 5)),
        ];
        for (degs, family) in cases {
            let s = DegreeVector::new(degs);
            let report = is_realizable(&s, &family).unwrap();
            let tree = FragmentTree::build(&family);
            let b = &report.bounds;
            for (id, node) in tree.nodes() {
                let degree_sum: i64 = node.vertices().iter().map(|&v| s.get(v) as i64).sum();
                assert_eq!(b.ell(id).rem_euclid(2), degree_sum.rem_euclid(2));
                assert_eq!(b.u(id).rem_euclid(2), degree_sum.rem_euclid(2));
            }
            if !report.realizable {
                continue;
            }
            let g = realize(&s, &family).unwrap();
            for (id, node) in tree.nodes() {
                let crossing: i64 = g
                    .edges()
                    .filter(|(p, _)| {
                        node.vertices().contains(&p.small()) != node.vertices().contains(&p.large())
                    })
                    .map(|(_, m)| m as i64)
                    .sum();
                assert!(
                    b.ell(id) <= crossing && crossing <= b.u(id),
                    "deficit sandwich fails at node {id}"
                );
            }
        }
    }
}
