use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LevyError>;

#[derive(Debug, Error)]
pub enum LevyError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("basis index {index} out of range 1..={k}")]
    Index { index: usize, k: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("window error: {0}")]
    Window(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("resource guard: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LevyError {
    pub fn parameter(msg: impl Into<String>) -> Self {
        LevyError::Parameter(msg.into())
    }
}
