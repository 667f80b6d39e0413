use thiserror::Error;

pub type Result<T> = std::result::Result<T, OrthoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("exponent p must lie in [1, inf], got {0}")]
    InvalidExponent(f64),

    #[error("non-finite scalar entry")]
    NonFinite,

    #[error("field mismatch: {detail}")]
    FieldMismatch { detail: String },

    #[error("{0} must be nonzero")]
    ZeroVector(&'static str),

    #[error("duality map is not single-valued for p = {0}; use the minimization-based test instead")]
    NonSmoothExponent(f64),

    #[error("Tx vanishes: the T-perp of x is the whole space")]
    FullSpacePerp,

    #[error("T-orthogonality is not left symmetric at x")]
    NotLeftSymmetric,

    #[error("reversed functional vanishes while Tx does not: no scalar links the two pairings")]
    UndeterminedScalar,

    #[error("direction theta = {0} is meaningless over the real field (only 0 and pi)")]
    RealFieldTheta(f64),

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("malformed input: {0}")]
    Malformed(String),
}
