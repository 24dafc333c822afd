use thiserror::Error;

/// Errors raised by the multi-focal toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree overflow: degree {degree} exceeds ambient dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("decomposability test unsupported for degree {degree} in dimension {dim}")]
    UnsupportedDegree { degree: usize, dim: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("matrix is singular")]
    Singular,

    #[error("tensor is not a relative invariant: {0}")]
    NotInvariant(String),

    #[error("arity mismatch: expected {expected} factors, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),

    #[error("ambiguous nullspace solution: nullity {nullity}")]
    AmbiguousSolution { nullity: usize },

    #[error("constraint matrix has a trivial kernel")]
    TrivialKernel,

    #[error("rotation is not special orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),

    #[error("desk-scale cap exceeded: {0}")]
    CapExceeded(String),

    #[error("random sampling failed after {0} attempts")]
    ResampleExhausted(usize),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
