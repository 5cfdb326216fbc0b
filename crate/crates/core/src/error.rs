use thiserror::Error;

use crate::edges::SubspaceLabel;

pub type Result<T, E = WalkError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid edge ({a}, {b}) for a complete graph on {n} vertices")]
    InvalidEdge { a: usize, b: usize, n: usize },

    #[error("edge index {index} out of range (dimension {dimension})")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("operation requires phase pi, got {0}")]
    UnsupportedPhase(f64),

    #[error("state is not normalized (norm deviation {0:e})")]
    NotNormalized(f64),

    #[error("subspace {0} is empty for this configuration")]
    EmptySubspace(SubspaceLabel),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
