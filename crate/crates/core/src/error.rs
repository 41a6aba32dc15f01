use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix must have at least one row and one column (got {n}x{m})")]
    EmptyMatrix { n: usize, m: usize },

    #[error("matrix has {got} cells, expected {n}x{m}")]
    ShapeMismatch { n: usize, m: usize, got: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {0} is not active")]
    InactiveVertex(VertexId),

    #[error("vertex {0} is already active")]
    AlreadyActive(VertexId),

    #[error("vertex {0} is outside this representation")]
    OutOfLayout(VertexId),

    #[error("component handle is stale or was never created")]
    StaleComponent,

    #[error("representations cover different vertex sets")]
    VertexSetMismatch,

    #[error("character {0} is out of range")]
    CharOutOfRange(usize),

    #[error("character {0} was already deactivated")]
    AlreadyDeactivated(usize),

    #[error("{found} unknown cells exceed the enumeration limit of {limit}")]
    TooManyUnknowns { found: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("invalid generator parameters: {0}")]
    GenParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
