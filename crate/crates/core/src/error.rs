use thiserror::Error;

/// Errors shared across the library.
///
/// Analysis *failures* (an axiom that does not hold, a map that does not
/// classify as declared) are reported as data, not as errors; errors are
/// reserved for misuse (space mismatch, missing capability) and resource
/// exhaustion.
#[derive(Debug, Error)]
pub enum EntError {
    #[error("cover belongs to space #{found} but space #{expected} was supplied")]
    SpaceMismatch { expected: u64, found: u64 },

    #[error("step budget of {budget} exhausted during {operation}")]
    BudgetExceeded { budget: u64, operation: &'static str },

    #[error("negative iterate requested but the map has no inverse")]
    MissingInverse,

    #[error("operation requires a unital space (no unit present)")]
    MissingUnit,

    #[error("operation requires an exhaustively enumerable space")]
    MissingEnumeration,

    #[error("map is declared {declared} but the sample check found at most {observed}")]
    DeclaredClassTooStrong { declared: String, observed: String },

    #[error("{0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl EntError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        EntError::Precondition(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        EntError::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, EntError>;
