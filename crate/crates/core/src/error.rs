//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by field construction, linear algebra, constructions and
/// verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Field or extension parameters outside the supported desk-scale range.
    #[error("field too large: {0}")]
    FieldTooLarge(String),

    /// A polynomial that is not monic, has the wrong degree, or is reducible.
    #[error("invalid modulus: {0}")]
    BadModulus(String),

    /// `p` is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Multiplicative inverse of zero.
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),

    /// Row/column/length mismatch between operands.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Subspace operands live in different ambient spaces or fields.
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    /// A subspace that was required to contain (or be contained in) another
    /// does not.
    #[error("containment violation: {0}")]
    NotContained(String),

    /// A precondition on construction or search parameters failed.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An enumeration or search would exceed its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
