//! Crate-wide error type.

/// Errors produced by graph construction, validation, and the
/// transformation algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("loop edge at vertex {0} is not allowed")]
    LoopEdge(usize),
    #[error("flip would create a loop")]
    LoopCreation,
    #[error("flip source edge ({0}, {1}) has multiplicity 0")]
    MissingEdge(usize, usize),
    #[error("graphs live on different vertex counts: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("multiplicity overflow on edge ({0}, {1})")]
    Overflow(usize, usize),
    #[error("sets {0:?} and {1:?} overlap but neither contains the other")]
    NotLaminar(Vec<usize>, Vec<usize>),
    #[error("nested collections may not contain the empty set")]
    EmptySet,
    #[error("operation requires an internal tree node, got a leaf")]
    LeafNode,
    #[error("node cannot extend the subtree: {0}")]
    NotExtensible(String),
    #[error("no provenance for quotient edge ({0}, {1})")]
    NoProvenance(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("target deficit does not match the parity of the degree sum")]
    ParityMismatch,
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("graphs are already equal")]
    AlreadyEqual,
    #[error("degree vectors differ at vertex {0}")]
    DegreeMismatch(usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("not a member of the constrained family: {0}")]
    NotMember(String),
    #[error("instance exceeds the size cap: {0}")]
    TooLarge(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex or element {0:?}")]
    UnknownVertex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
