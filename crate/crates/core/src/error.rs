//! Error taxonomy shared by every module in this crate.

use thiserror::Error;

/// Failure modes for type construction and algorithm operations.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum CoreError {
    /// A probability outside `[0, 1]`, or NaN.
    #[error("invalid probability {value}: must lie in [0, 1]")]
    InvalidProbability { value: f64 },

    /// An outcome encoding other than 0 or 1.
    #[error("invalid outcome {value}: must be 0 or 1")]
    InvalidOutcome { value: f64 },

    /// A weight vector that fails simplex validation.
    #[error("simplex violation: {reason}")]
    Simplex { reason: String },

    /// Mismatched lengths between paired inputs.
    #[error("dimension mismatch: {reason}")]
    Dimension { reason: String },

    /// A round index outside the panel horizon.
    #[error("round index {index} out of range for horizon {horizon}")]
    RoundOutOfRange { index: usize, horizon: usize },

    /// A parameter outside its admissible range.
    #[error("invalid parameter: {reason}")]
    Parameter { reason: String },

    /// A wagering mechanism that broke budget balance or non-negativity.
    #[error("mechanism contract violated: {reason}")]
    MechanismContract { reason: String },

    /// An exact enumeration whose size would exceed the configured budget.
    #[error("enumeration budget exceeded: {reason}")]
    BudgetExceeded { reason: String },

    /// An operation that is not defined for the requested algorithm.
    #[error("unsupported: {reason}")]
    Unsupported { reason: String },
}

impl CoreError {
    pub(crate) fn simplex(reason: impl Into<String>) -> Self {
        CoreError::Simplex {
            reason: reason.into(),
        }
    }

    pub(crate) fn dimension(reason: impl Into<String>) -> Self {
        CoreError::Dimension {
            reason: reason.into(),
        }
    }

    pub(crate) fn parameter(reason: impl Into<String>) -> Self {
        CoreError::Parameter {
            reason: reason.into(),
        }
    }

    pub(crate) fn mechanism(reason: impl Into<String>) -> Self {
        CoreError::MechanismContract {
            reason: reason.into(),
        }
    }

    pub(crate) fn budget(reason: impl Into<String>) -> Self {
        CoreError::BudgetExceeded {
            reason: reason.into(),
        }
    }

    pub(crate) fn unsupported(reason: impl Into<String>) -> Self {
        CoreError::Unsupported {
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
