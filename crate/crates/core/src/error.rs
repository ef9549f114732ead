use thiserror::Error;

use crate::exactnum::Rat;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite (pivot {pivot} is {value})")]
    NotPositiveDefinite { pivot: usize, value: Rat },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("dimension {n} exceeds the configured cap {cap}")]
    DimensionCapExceeded { n: usize, cap: usize },
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("halfspace intersection is empty or lower-dimensional")]
    LowerDimensional,
    #[error("polytope is not centrally symmetric about {0}")]
    NotCentrallySymmetric(String),
    #[error("point {0} is not a deep hole")]
    NotADeepHole(String),
    #[error("tessellation pieces are incomplete: {0}")]
    IncompletePieces(String),
    #[error("expected {expected} points, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
