//! Failures of the command-line frontend and their exit codes.

use std::path::PathBuf;
use thiserror::Error;

/// Exit code for a golden-table mismatch.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit code for invalid flags or unusable paths.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for a failed computation.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure in {0}")]
    Numeric(#[from] darboux::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{failed} of {gating} gating reference cells differ")]
    Mismatch { failed: usize, gating: usize },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Mismatch { .. } => EXIT_MISMATCH,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
