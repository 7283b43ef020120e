use thiserror::Error;

/// Errors raised by the library.
///
/// A congruence that fails to hold is *not* an error: it is reported through
/// [`crate::congruence::CongruenceReport`]. The variants here signal either bad
/// input or an internal cross-check that disagreed, which points at a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no substitution given for variable x_{0}")]
    MissingSubstitution(usize),

    #[error("inexact division while computing {context}: {numerator} / {denominator}")]
    InexactDivision {
        context: String,
        numerator: String,
        denominator: String,
    },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("cannot parse polynomial: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
