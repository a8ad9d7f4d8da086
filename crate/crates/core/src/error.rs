use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// A value violates the invariants of its type.
    #[error("invalid value: {0}")]
    Invalid(String),
    /// Operands are individually valid but do not fit together.
    #[error("contract violation: {0}")]
    Contract(String),
    /// An operation was called outside its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a certificate checker refused its input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct Rejection(pub String);
