use thiserror::Error;

/// Input and budget errors shared by the library modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} occurs twice in a sequence")]
    DuplicateVertex(usize),
    #[error("constant index {index} is out of range ({count} constants)")]
    ConstantOutOfRange { index: usize, count: usize },
    #[error("tuple of length {tuple} does not match a pattern of length {pattern}")]
    LengthMismatch { tuple: usize, pattern: usize },
    #[error("{what} exceeds the configured budget of {limit}")]
    Budget { what: &'static str, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("left vertices {0} and {1} are twins")]
    Twins(usize, usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
