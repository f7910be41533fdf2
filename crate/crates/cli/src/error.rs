use std::path::PathBuf;

use popcorn_core::PopcornError;
use thiserror::Error;

/// Exit status for malformed invocations (BSD `EX_USAGE`).
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] PopcornError),

    #[error("{0}")]
    Usage(String),

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(PopcornError::CostGuard { .. } | PopcornError::OracleTooLarge { .. }) => EXIT_GUARD,
            // every other library error is a rejected input
            CliError::Core(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Write { .. } | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
