use thiserror::Error;

/// Errors shared across the arithmetic, lattice, and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("precision too small: {0}")]
    PrecisionTooSmall(String),
    #[error("precision mismatch: {lhs} vs {rhs}")]
    PrecisionMismatch { lhs: u32, rhs: u32 },
    #[error("cannot guarantee requested output precision: {0}")]
    PrecisionExhausted(String),
    #[error("element is not a unit (valuation {0})")]
    NotAUnit(i64),
    #[error("matrix is not invertible at working precision")]
    NotInvertible,
    #[error("operand violates the required lattice shape: {0}")]
    ShapeViolation(String),
    #[error("matrix is not trace-zero at working precision")]
    NotTraceZero,
    #[error("claimed modulus is not a subgroup of the ambient group: {0}")]
    NotASubgroup(String),
    #[error("enumeration exceeds configured cap: {0}")]
    Overflow(String),
    #[error("parameters violate the theorem hypothesis: {0}")]
    HypothesisViolated(String),
    #[error("projective coordinates are not primitive (both non-units)")]
    NotPrimitive,
    #[error("internal invariant violated: {0}")]
    InternalError(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
