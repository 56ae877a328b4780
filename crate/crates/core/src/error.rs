//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid discriminant {0}: a discriminant must satisfy D >= 5 and D ≡ 0,1 (mod 4)")]
    InvalidDiscriminant(i64),

    /// The operation is defined, but not for this kind of discriminant.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Two independent computations disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("lattice not preserved: {0}")]
    LatticeNotPreserved(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Rational reconstruction failed at this working precision.
    #[error("precision insufficient at {bits} bits: {detail}")]
    PrecisionInsufficient { bits: usize, detail: String },

    #[error("reference data: {0}")]
    Reference(String),
}

impl Error {
    /// True for errors that indicate a bug or a disagreement between routes,
    /// as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Consistency(_) | Error::LatticeNotPreserved(_) | Error::Reference(_)
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub(crate) fn not_applicable(msg: impl Into<String>) -> Self {
        Error::NotApplicable(msg.into())
    }
}
