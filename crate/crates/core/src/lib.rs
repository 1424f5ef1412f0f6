//! Loop-free multigraphs with prescribed degrees and nested connectivity
//! constraints.
//!
//! Given a degree vector `S` over labeled vertices and a nested (laminar)
//! collection of vertex sets `CC`, this crate decides whether some loop-free
//! multigraph realizes `S` while every set of `CC` induces a connected
//! subgraph, constructs such a realization, and computes flip sequences
//! transforming one realization into another without ever leaving the
//! constrained family. A flip replaces edges `ab`, `cd` by `ac`, `bd`; it
//! preserves all degrees and is reversible.
//!
//! Modules:
//! - [`multigraph`]: the core graph type, flips, and multiset edge algebra.
//! - [`fragments`]: laminar families, the fragment tree, quotient graphs,
//!   well-structured subtrees, and flip lifting.
//! - [`realize`]: degree-deficit bounds, the realizability decision, and
//!   constructive realization.
//! - [`reconfig_connected`]: transformation between connected realizations
//!   in at most `delta(G, H)` flips (a 4-approximation of the optimum).
//! - [`reconfig_nested`]: transformation under a full nested collection in
//!   at most `(2d + 1) * delta(G, H)` flips, `d` the height of the family.
//! - [`distance`]: exact flip distance at small scale (breadth-first search
//!   and symmetric circuit partitions) plus exhaustive enumeration of the
//!   constrained family.
//! - [`oracle`]: brute-force reference implementations used for
//!   cross-checking.
//! - [`instance`]: the text formats for instances, graphs, and flip
//!   sequences shared by the CLI and the browser demo.

pub mod distance;
pub mod error;
pub mod fragments;
pub mod instance;
pub mod multigraph;
pub mod oracle;
pub mod realize;
pub mod reconfig_connected;
pub mod reconfig_nested;

pub use error::{Error, Result};
pub use fragments::{ContractedView, FragmentTree, NestedCollection, WellStructuredSubtree};
pub use multigraph::{DegreeVector, EdgeMultiset, Flip, FlipSequence, Multigraph, VertexPair};
