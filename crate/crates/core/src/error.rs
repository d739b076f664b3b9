use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),
    #[error("invalid group element ({i}, {j})")]
    InvalidElement { i: usize, j: usize },
    #[error("group of order {order} exceeds the Cayley-table cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("not implemented for this group family: {0}")]
    NotImplemented(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("lattice generators do not have full rank")]
    NotFullRank,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("sublattice is not contained in the superlattice")]
    NotContained,
    #[error("dimension {dim} exceeds the enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("numerical routine did not converge: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
