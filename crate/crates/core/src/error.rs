use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimension mismatch between operands.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input violates a validity invariant (Hermiticity, trace, positivity, ...).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A numerical procedure failed to meet its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Request exceeds a configured capability limit.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Malformed input file or flag value.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
