use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Base dimensions, ranks or tensor shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Malformed text or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// An input violates a required symmetry (skew bracket, antisymmetric form, ...).
    #[error("symmetry violation: {0}")]
    Symmetry(String),
    /// A constructor's precondition failed; the message names the witness.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An exact inverse was requested for a matrix whose determinant is not a nonzero constant.
    #[error("not invertible: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
