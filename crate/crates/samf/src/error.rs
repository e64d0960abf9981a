use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
    #[error("cannot write {path}: {reason}")]
    Unwritable { path: PathBuf, reason: String },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("bad mask: {0}")]
    BadMask(String),
    #[error("no <stem>-A / <stem>-B pairs found in {0}")]
    NoPairs(PathBuf),
    #[error(transparent)]
    Core(samf_core::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unreadable { .. } => 2,
            CliError::DimensionMismatch { .. } => 3,
            CliError::BadConfig(_) | CliError::BadMask(_) => 4,
            CliError::NoPairs(_) => 5,
            CliError::Unwritable { .. } | CliError::Core(_) => 1,
        }
    }

    pub(crate) fn unreadable(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        CliError::Unreadable {
            path: path.into(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn unwritable(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        CliError::Unwritable {
            path: path.into(),
            reason: reason.to_string(),
        }
    }
}

impl From<samf_core::Error> for CliError {
    fn from(e: samf_core::Error) -> Self {
        match e {
            samf_core::Error::DimensionMismatch { expected, found } => {
                CliError::DimensionMismatch { expected, found }
            }
            samf_core::Error::InvalidParameter { .. } => CliError::BadConfig(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
