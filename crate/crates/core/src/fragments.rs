//! Laminar families of vertex sets, the rooted tree they induce, quotient
//! graphs, and the flip predicates built on them.
//!
//! A collection of vertex sets is nested (laminar) when every two sets are
//! disjoint or one contains the other. After normalization the collection
//! contains the full vertex set and every singleton, so it corresponds to a
//! rooted tree whose leaves are the vertices: the fragment tree.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::multigraph::{DegreeVector, Flip, Multigraph, Vertex, VertexPair};

/// Node index into a [`FragmentTree`].
pub type NodeId = usize;

/// A normalized nested collection over vertices `0..n`: laminar, free of
/// duplicates and empty sets, containing the full vertex set and all
/// singletons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedCollection {
    n: usize,
    sets: Vec<BTreeSet<Vertex>>,
}

impl NestedCollection {
    /// Checks laminarity and normalizes: deduplicates, then adds the full
    /// vertex set and all singletons if absent.
    pub fn validate_and_normalize(sets: &[Vec<Vertex>], n: usize) -> Result<Self> {
        let mut canon: Vec<BTreeSet<Vertex>> = Vec::new();
        for raw in sets {
            let set: BTreeSet<Vertex> = raw.iter().copied().collect();
            if set.is_empty() {
                return Err(Error::EmptySet);
            }
            if let Some(&max) = set.iter().next_back() {
                if max >= n {
                    return Err(Error::VertexOutOfRange(max, n));
                }
            }
            if !canon.contains(&set) {
                canon.push(set);
            }
        }
        for i in 0..canon.len() {
            for j in (i + 1)..canon.len() {
                let (a, b) = (&canon[i], &canon[j]);
                let disjoint = a.is_disjoint(b);
                let nested = a.is_subset(b) || b.is_subset(a);
                if !disjoint && !nested {
                    return Err(Error::NotLaminar(
                        a.iter().copied().collect(),
                        b.iter().copied().collect(),
                    ));
                }
            }
        }
        let full: BTreeSet<Vertex> = (0..n).collect();
        if n > 0 && !canon.contains(&full) {
            canon.push(full);
        }
        for v in 0..n {
            let single: BTreeSet<Vertex> = [v].into_iter().collect();
            if !canon.contains(&single) {
                canon.push(single);
            }
        }
        // Decreasing cardinality, ties by lexicographic vertex order: the
        // insertion order used by the tree builder.
        canon.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        Ok(Self { n, sets: canon })
    }

    /// The trivial collection `{V} + singletons`.
    pub fn trivial(n: usize) -> Self {
        Self::validate_and_normalize(&[], n).expect("trivial collection is laminar")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[BTreeSet<Vertex>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// One node of the fragment tree.
#[derive(Debug, Clone)]
pub struct FragmentNode {
    vertices: BTreeSet<Vertex>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    depth: usize,
}

impl FragmentNode {
    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    /// Number of sets on the chain from the root to this node, inclusive.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// The rooted tree of a normalized nested collection: the root is the full
/// vertex set, leaves are the singletons, and a node's children partition
/// it. Node 0 is always the root.
#[derive(Debug, Clone)]
pub struct FragmentTree {
    n: usize,
    nodes: Vec<FragmentNode>,
    leaf_of: Vec<NodeId>,
    height: usize,
}

impl FragmentTree {
    pub fn build(cc: &NestedCollection) -> Self {
        let n = cc.n;
        if n == 0 {
            // Degenerate: a single empty root.
            return Self {
                n,
                nodes: vec![FragmentNode {
                    vertices: BTreeSet::new(),
                    parent: None,
                    children: Vec::new(),
                    depth: 1,
                }],
                leaf_of: Vec::new(),
                height: 1,
            };
        }
        // Sets come sorted by decreasing cardinality, so each set's parent
        // is already in the tree when the set is inserted.
        let mut nodes: Vec<FragmentNode> = Vec::with_capacity(cc.sets.len());
        for set in &cc.sets {
            if nodes.is_empty() {
                nodes.push(FragmentNode {
                    vertices: set.clone(),
                    parent: None,
                    children: Vec::new(),
                    depth: 1,
                });
                continue;
            }
            // Walk down from the root to the smallest superset.
            let mut at: NodeId = 0;
            'descend: loop {
                for &ch in &nodes[at].children {
                    if set.is_subset(&nodes[ch].vertices) {
                        at = ch;
                        continue 'descend;
                    }
                }
                break;
            }
            let id = nodes.len();
            let depth = nodes[at].depth + 1;
            nodes.push(FragmentNode {
                vertices: set.clone(),
                parent: Some(at),
                children: Vec::new(),
                depth,
            });
            nodes[at].children.push(id);
        }
        // Children were appended in (size-desc, lex) order; re-sort by
        // their vertex sets for a stable, contiguous-by-min-vertex order.
        let sets: Vec<BTreeSet<Vertex>> = nodes.iter().map(|nd| nd.vertices.clone()).collect();
        for node in nodes.iter_mut() {
            node.children.sort_by(|&x, &y| sets[x].cmp(&sets[y]));
        }
        let mut leaf_of = vec![usize::MAX; n];
        for (id, node) in nodes.iter().enumerate() {
            if node.is_leaf() {
                debug_assert_eq!(node.vertices.len(), 1);
                leaf_of[*node.vertices.iter().next().unwrap()] = id;
            }
        }
        let height = nodes.iter().map(|nd| nd.depth).max().unwrap_or(1);
        Self {
            n,
            nodes,
            leaf_of,
            height,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &FragmentNode {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &FragmentNode)> {
        self.nodes.iter().enumerate()
    }

    /// Leaf node holding vertex `v`.
    pub fn leaf_of(&self, v: Vertex) -> NodeId {
        self.leaf_of[v]
    }

    /// Maximum number of sets in a containment chain of the collection.
    /// The trivial collection on `n >= 2` vertices has height 2.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Node ids of the subtree rooted at `id`, in breadth-first order.
    pub fn subtree(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.nodes[out[i]].children);
            i += 1;
        }
        out
    }

    /// All node ids in breadth-first order from the root, ties between
    /// siblings resolved by the stored (sorted) child order.
    pub fn bfs_order(&self) -> Vec<NodeId> {
        self.subtree(self.root())
    }

    /// True iff the degree vector matches `s` and every fragment induces a
    /// connected subgraph of `g`.
    pub fn check_membership(&self, g: &Multigraph, s: &DegreeVector) -> bool {
        if g.vertex_count() != self.n || s.len() != self.n {
            return false;
        }
        if &g.degree_vector() != s {
            return false;
        }
        self.all_fragments_connected(g)
    }

    /// True iff every fragment induces a connected subgraph of `g`.
    pub fn all_fragments_connected(&self, g: &Multigraph) -> bool {
        if g.vertex_count() != self.n {
            return false;
        }
        self.nodes.iter().all(|node| {
            let set: Vec<Vertex> = node.vertices.iter().copied().collect();
            g.is_connected_subset(&set)
        })
    }

    /// True iff applying `f` leaves every fragment connected. Flips that
    /// are not applicable to `g` are not correct.
    pub fn is_correct_flip(&self, g: &Multigraph, f: Flip) -> bool {
        match g.apply_flip(f) {
            Ok(next) => self.all_fragments_connected(&next),
            Err(_) => false,
        }
    }

    /// Quotient of `g[C]` by the children of `C`.
    pub fn contract(&self, g: &Multigraph, c: NodeId) -> Result<ContractedView> {
        let node = &self.nodes[c];
        if node.is_leaf() {
            return Err(Error::LeafNode);
        }
        let blocks: Vec<BTreeSet<Vertex>> = node
            .children
            .iter()
            .map(|&ch| self.nodes[ch].vertices.clone())
            .collect();
        ContractedView::build(g, blocks, node.children.clone())
    }

    /// Quotient of the whole of `g` by the leaf sets of a well-structured
    /// subtree. With the full tree this is a relabeled copy of `g`.
    pub fn inherited(&self, g: &Multigraph, t: &WellStructuredSubtree) -> Result<ContractedView> {
        let leaf_nodes = t.leaves(self);
        let blocks: Vec<BTreeSet<Vertex>> = leaf_nodes
            .iter()
            .map(|&id| self.nodes[id].vertices.clone())
            .collect();
        ContractedView::build(g, blocks, leaf_nodes)
    }
}

/// A quotient multigraph together with provenance back to the base edges.
///
/// Blocks are disjoint vertex sets covering the quotiented part of the
/// graph; the quotient multiplicity between two blocks equals the number of
/// base edges crossing them, and `provenance` lists those base edges (with
/// repetition for parallel edges) per block pair.
#[derive(Debug, Clone)]
pub struct ContractedView {
    blocks: Vec<BTreeSet<Vertex>>,
    /// Fragment-tree node each block came from.
    block_nodes: Vec<NodeId>,
    qgraph: Multigraph,
    provenance: BTreeMap<VertexPair, Vec<VertexPair>>,
}

impl ContractedView {
    fn build(g: &Multigraph, blocks: Vec<BTreeSet<Vertex>>, block_nodes: Vec<NodeId>) -> Result<Self> {
        let mut block_of: Vec<Option<usize>> = vec![None; g.vertex_count()];
        for (idx, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= g.vertex_count() {
                    return Err(Error::VertexOutOfRange(v, g.vertex_count()));
                }
                block_of[v] = Some(idx);
            }
        }
        let mut qgraph = Multigraph::empty(blocks.len());
        let mut provenance: BTreeMap<VertexPair, Vec<VertexPair>> = BTreeMap::new();
        for (pair, m) in g.edges() {
            let (Some(x), Some(y)) = (block_of[pair.small()], block_of[pair.large()]) else {
                continue;
            };
            if x == y {
                continue;
            }
            let qpair = VertexPair::new(x, y)?;
            qgraph.add_edge_mult(x, y, m)?;
            let slot = provenance.entry(qpair).or_default();
            for _ in 0..m {
                slot.push(pair);
            }
        }
        Ok(Self {
            blocks,
            block_nodes,
            qgraph,
            provenance,
        })
    }

    pub fn qgraph(&self) -> &Multigraph {
        &self.qgraph
    }

    pub fn blocks(&self) -> &[BTreeSet<Vertex>] {
        &self.blocks
    }

    pub fn block(&self, idx: usize) -> &BTreeSet<Vertex> {
        &self.blocks[idx]
    }

    /// Fragment-tree node ids the blocks correspond to, parallel to
    /// `blocks()`.
    pub fn block_nodes(&self) -> &[NodeId] {
        &self.block_nodes
    }

    /// Index of the block corresponding to tree node `id`, if any.
    pub fn block_of_node(&self, id: NodeId) -> Option<usize> {
        self.block_nodes.iter().position(|&b| b == id)
    }

    /// Block containing base vertex `v`, if any.
    pub fn block_of_vertex(&self, v: Vertex) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&v))
    }

    /// Base edges recorded for the quotient pair, sorted.
    pub fn provenance_of(&self, x: usize, y: usize) -> &[VertexPair] {
        match VertexPair::new(x, y) {
            Ok(qpair) => self
                .provenance
                .get(&qpair)
                .map(Vec::as_slice)
                .unwrap_or(&[]),
            Err(_) => &[],
        }
    }

    /// Picks a base edge behind the quotient pair `(x, y)`. When
    /// `prefer_bad` carries a `(G, H)` pair, base edges with surplus
    /// multiplicity in `G` over `H` are preferred; ties and fallbacks are
    /// resolved to the lexicographically smallest candidate.
    pub fn pick_base_edge(
        &self,
        x: usize,
        y: usize,
        prefer_bad: Option<(&Multigraph, &Multigraph)>,
    ) -> Result<VertexPair> {
        let candidates = self.provenance_of(x, y);
        if candidates.is_empty() {
            return Err(Error::NoProvenance(x.min(y), x.max(y)));
        }
        if let Some((g, h)) = prefer_bad {
            if let Some(&bad) = candidates
                .iter()
                .find(|p| g.multiplicity_of(**p) > h.multiplicity_of(**p))
            {
                return Ok(bad);
            }
        }
        Ok(candidates[0])
    }

    /// Lifts a flip on the quotient graph to a flip on the base graph via
    /// provenance. The four blocks must be pairwise distinct. The endpoint
    /// of the lifted flip inside block `f.a` plays the role of `a`, and so
    /// on, so the created base edges cross the same block pairs as the
    /// created quotient edges.
    pub fn lift_flip(
        &self,
        f: Flip,
        prefer_bad: Option<(&Multigraph, &Multigraph)>,
    ) -> Result<Flip> {
        let ids = [f.a, f.b, f.c, f.d];
        for (i, x) in ids.iter().enumerate() {
            for y in &ids[i + 1..] {
                if x == y {
                    return Err(Error::PreconditionViolated(
                        "lift_flip requires four pairwise distinct blocks".into(),
                    ));
                }
            }
        }
        let ab = self.pick_base_edge(f.a, f.b, prefer_bad)?;
        let cd = self.pick_base_edge(f.c, f.d, prefer_bad)?;
        let a_end = self.endpoint_in_block(ab, f.a)?;
        let b_end = self.endpoint_in_block(ab, f.b)?;
        let c_end = self.endpoint_in_block(cd, f.c)?;
        let d_end = self.endpoint_in_block(cd, f.d)?;
        Flip::new(a_end, b_end, c_end, d_end)
    }

    fn endpoint_in_block(&self, pair: VertexPair, block: usize) -> Result<Vertex> {
        let set = &self.blocks[block];
        if set.contains(&pair.small()) {
            Ok(pair.small())
        } else if set.contains(&pair.large()) {
            Ok(pair.large())
        } else {
            Err(Error::NoProvenance(pair.small(), pair.large()))
        }
    }

    /// True iff both source edges of `f` touch the special block set
    /// `special`, neither created edge lies entirely outside it, and the
    /// special set still induces a connected quotient subgraph after the
    /// flip.
    pub fn is_special_flip(&self, special: &BTreeSet<usize>, f: Flip) -> bool {
        let Ok(next) = self.qgraph.apply_flip(f) else {
            return false;
        };
        let (s1, s2) = f.sources();
        let touches = |p: VertexPair| special.contains(&p.small()) || special.contains(&p.large());
        if !touches(s1) || !touches(s2) {
            return false;
        }
        let (t1, t2) = f.targets();
        if !touches(t1) || !touches(t2) {
            return false;
        }
        let subset: Vec<usize> = special.iter().copied().collect();
        next.is_connected_subset(&subset)
    }
}

/// A subtree of the fragment tree containing the root in which the
/// children of any node are taken all-or-none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellStructuredSubtree {
    members: BTreeSet<NodeId>,
}

impl WellStructuredSubtree {
    /// The subtree consisting of the root alone.
    pub fn root_only(tree: &FragmentTree) -> Self {
        Self {
            members: [tree.root()].into_iter().collect(),
        }
    }

    /// The whole fragment tree.
    pub fn full(tree: &FragmentTree) -> Self {
        Self {
            members: (0..tree.node_count()).collect(),
        }
    }

    pub fn members(&self) -> &BTreeSet<NodeId> {
        &self.members
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.members.contains(&id)
    }

    pub fn is_full(&self, tree: &FragmentTree) -> bool {
        self.members.len() == tree.node_count()
    }

    /// Leaves of this subtree: members none of whose tree children are
    /// members. Their vertex sets partition the vertex set.
    pub fn leaves(&self, tree: &FragmentTree) -> Vec<NodeId> {
        self.members
            .iter()
            .copied()
            .filter(|&id| {
                tree.node(id)
                    .children()
                    .iter()
                    .all(|ch| !self.members.contains(ch))
            })
            .collect()
    }

    /// Subtree leaves that are internal tree nodes, i.e. the candidates
    /// for extension.
    pub fn extensible_leaves(&self, tree: &FragmentTree) -> Vec<NodeId> {
        self.leaves(tree)
            .into_iter()
            .filter(|&id| !tree.node(id).is_leaf())
            .collect()
    }

    /// Grows the subtree by the children of `c`, which must be a leaf of
    /// this subtree and internal in the full tree. Returns the extension
    /// and the set of special nodes (the children of `c`).
    pub fn extend(&self, tree: &FragmentTree, c: NodeId) -> Result<(Self, Vec<NodeId>)> {
        if !self.members.contains(&c) {
            return Err(Error::NotExtensible(format!(
                "node {c} is not in the subtree"
            )));
        }
        let node = tree.node(c);
        if node.is_leaf() {
            return Err(Error::NotExtensible(format!(
                "node {c} is a leaf of the fragment tree"
            )));
        }
        if node.children().iter().any(|ch| self.members.contains(ch)) {
            return Err(Error::NotExtensible(format!(
                "node {c} is already expanded"
            )));
        }
        let mut members = self.members.clone();
        members.extend(node.children().iter().copied());
        Ok((Self { members }, node.children().to_vec()))
    }
}

/// An edge inside fragment `c` of `g` with surplus multiplicity over `h`
/// whose single-copy removal keeps every fragment connected.
///
/// Requires `|E_g(C, V - C)| < |E_h(C, V - C)|` with both graphs
/// realizing the same degrees, which forces `g[C]` to carry more edges
/// than `h[C]`. The search descends to a node whose quotient has surplus
/// edges, takes the connected components of the quotient intersection as
/// blocks, and removes either a surplus edge inside a block or a surplus
/// edge on a cycle between blocks.
pub fn find_removable_edge(
    g: &Multigraph,
    h: &Multigraph,
    tree: &FragmentTree,
    c: NodeId,
) -> Result<VertexPair> {
    let set = tree.node(c).vertices();
    let crossing = |graph: &Multigraph| -> usize {
        graph
            .edges()
            .filter(|(p, _)| set.contains(&p.small()) != set.contains(&p.large()))
            .map(|(_, m)| m)
            .sum()
    };
    if crossing(g) >= crossing(h) {
        return Err(Error::PreconditionViolated(format!(
            "fragment {c} does not have fewer crossing edges in the first graph"
        )));
    }
    for node in tree.subtree(c) {
        if tree.node(node).is_leaf() {
            continue;
        }
        let qg = tree.contract(g, node)?;
        let qh = tree.contract(h, node)?;
        if qg.qgraph().edge_count() <= qh.qgraph().edge_count() {
            continue;
        }
        // Blocks: connected components of the quotient intersection.
        let nblocks = qg.qgraph().vertex_count();
        let inter = qg.qgraph().intersect(qh.qgraph())?;
        let mut inter_graph = Multigraph::empty(nblocks);
        for (pair, m) in inter.iter() {
            inter_graph.add_edge_mult(pair.small(), pair.large(), m)?;
        }
        let mut comp_of = vec![0usize; nblocks];
        for (ci, comp) in inter_graph.components().iter().enumerate() {
            for &v in comp {
                comp_of[v] = ci;
            }
        }
        let surplus = qg.qgraph().minus(qh.qgraph())?;
        // Surplus edge inside one intersection component: its removal
        // keeps the quotient connected through the intersection edges.
        for (pair, _) in surplus.iter() {
            if comp_of[pair.small()] == comp_of[pair.large()] {
                let base = qg.pick_base_edge(pair.small(), pair.large(), Some((g, h)))?;
                return Ok(base);
            }
        }
        // Otherwise the surplus edges form a cycle between components;
        // any surplus edge on such a cycle is safe to remove.
        let ncomps = inter_graph.components().len();
        let mut comp_graph = Multigraph::empty(ncomps);
        for (pair, m) in surplus.iter() {
            comp_graph.add_edge_mult(comp_of[pair.small()], comp_of[pair.large()], m)?;
        }
        if let Some(comp_pair) = comp_graph.non_bridge_edge_in(&comp_graph.edge_multiset()) {
            for (pair, _) in surplus.iter() {
                let cp = VertexPair::new(comp_of[pair.small()], comp_of[pair.large()])?;
                if cp == comp_pair {
                    let base = qg.pick_base_edge(pair.small(), pair.large(), Some((g, h)))?;
                    return Ok(base);
                }
            }
        }
    }
    Err(Error::PreconditionViolated(format!(
        "no removable surplus edge found inside fragment {c}"
    )))
}
