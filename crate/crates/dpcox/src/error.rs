//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by lattice, enumeration, classification and verification code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two classes from lattices of different degree were combined.
    #[error("lattice context mismatch: degree {left} vs degree {right}")]
    ContextMismatch { left: u8, right: u8 },

    /// An argument lies outside the supported domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An invariant that must hold for valid inputs was found broken.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    /// Polynomial arities do not agree.
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    /// A polynomial does not lie in the principal ideal it was divided by.
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    /// A polynomial is not homogeneous for the grading in use.
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),

    /// A Gröbner computation exceeded its hard resource cap.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// A point has no nonzero coordinate of weight one.
    #[error("no affine chart with a weight-one coordinate contains the point")]
    UnsupportedChart,

    /// The degree scan ended before the classification was decided.
    #[error("classification inconclusive within scan bound {bound}")]
    Inconclusive { bound: i64 },

    /// The catalog document is malformed.
    #[error("catalog error at {path}: {message}")]
    Catalog { path: String, message: String },
}
