use thiserror::Error;

/// Errors raised by the model, the evaluators and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coloring has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vertex index {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("label {label} lists vertex {vertex} more than once")]
    DuplicateVertex { label: usize, vertex: usize },

    #[error("coloring entry {index} is {value}, expected +1 or -1")]
    InvalidSign { index: usize, value: i64 },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instance has {n} vertices, exceeding the exhaustive cap of {cap}")]
    OverCap { n: usize, cap: usize },

    #[error("{0}")]
    OutOfRange(String),

    #[error("bipartization did not terminate; no coloring can be extracted")]
    NotTerminated,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
