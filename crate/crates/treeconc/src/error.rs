//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (bad edge id, offset out of range,
    /// empty measure, mass mismatch, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input that is structurally fine but outside what the exact algorithms
    /// support (e.g. unstructured metric spaces too large for exact search).
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
