//! Harness error type, mapped onto the CLI's exit codes.

use std::path::PathBuf;

use wagerlearn_core::CoreError;

/// Process exit codes: 0 success, 2 validation or parameter problem, 3 data
/// integrity problem, 4 I/O failure.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Validation(String),

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("{path}: {reason}")]
    Integrity { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn validation(msg: impl Into<String>) -> Self {
        HarnessError::Validation(msg.into())
    }

    pub fn parse(path: impl Into<PathBuf>, line: u64, reason: impl Into<String>) -> Self {
        HarnessError::Parse {
            path: path.into(),
            line,
            reason: reason.into(),
        }
    }

    pub fn integrity(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        HarnessError::Integrity {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(_) | HarnessError::Validation(_) => 2,
            HarnessError::Parse { .. } | HarnessError::Integrity { .. } => 3,
            HarnessError::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
