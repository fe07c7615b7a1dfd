use thiserror::Error;

/// Errors raised by the library.
///
/// Verification failures are not errors: they are reported as data in
/// [`crate::hyperfield::VerificationReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("capacity exceeded: {what} is {requested}, limit is {limit}{hint}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
        hint: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid swap (clause {clause}): {message}")]
    InvalidSwap { clause: u8, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, requested: u128, limit: u128) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
            hint: "",
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
