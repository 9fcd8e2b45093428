use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("direction {dir} out of range for dimension {dim}")]
    DirectionOutOfRange { dir: usize, dim: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    /// A resource guard refused the request; rerun with the override to force it.
    #[error("resource guard: {0}")]
    Guard(String),

    #[error("letter {0} has no assigned value")]
    UnassignedLetter(String),

    #[error("{0} does not divide {1}")]
    NotDivisible(String, String),

    #[error("brick {0} is not balanced")]
    Unbalanced(String),

    /// An internal consistency check on a structural fact failed.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
