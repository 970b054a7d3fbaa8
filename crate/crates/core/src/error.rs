use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a Witt vector: ghost recursion fails at index {index}")]
    NotAWittVector { index: usize },
    #[error("precision: {0}")]
    Precision(String),
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),
    #[error("formal group law axioms fail at degree {degree}: {what}")]
    InvalidFgl { degree: u32, what: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A step that is a theorem failed; this signals a bug, not bad input.
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
