use thiserror::Error;

use crate::hypergraph::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("uniformity must be at least {min}, got {k}")]
    InvalidUniformity { k: usize, min: usize },

    #[error("a hypergraph needs at least one vertex")]
    NoVertices,

    #[error("edge {index} has {found} vertices, expected {expected}")]
    EdgeSize {
        index: usize,
        found: usize,
        expected: usize,
    },

    #[error("edge {index} contains vertex {vertex}, outside 1..={n}")]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        n: usize,
    },

    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: usize },

    #[error("duplicate edge {edge:?}")]
    DuplicateEdge { edge: Vec<usize> },

    #[error("vertex {vertex} is not in 1..={n}")]
    UnknownVertex { vertex: Vertex, n: usize },

    #[error("codegree needs two distinct vertices, got {0} twice")]
    SameVertex(Vertex),

    #[error("vertex {0} has degree 0")]
    IsolatedVertex(Vertex),

    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("hypergraph needs at least 2 vertices")]
    TooFewVertices,

    #[error("hypergraph is disconnected")]
    Disconnected,

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("no regular hypergraph found after {attempts} restarts")]
    RetryBudgetExhausted { attempts: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vector length {found} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("entry {index} must be strictly positive, got {value}")]
    NonPositive { index: usize, value: f64 },

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("non-finite value in power iteration at step {iteration}")]
    NumericFailure { iteration: usize },
}
