use std::path::Path;

use hindman_core::{CatalogError, FinSetError, MatchError};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const VERIFIED: i32 = 0;
    pub const VIOLATED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const OVERFLOW: i32 = 3;
    pub const EXHAUSTED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("universe overflow: {0}")]
    Overflow(String),
    #[error("exhausted: {0}")]
    Exhausted(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Overflow(_) => exit::OVERFLOW,
            CliError::Exhausted(_) => exit::EXHAUSTED,
            CliError::Certificate(_) => exit::VIOLATED,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Usage(format!("{}: {err}", path.display()))
    }
}

impl From<FinSetError> for CliError {
    fn from(err: FinSetError) -> Self {
        match err {
            FinSetError::UniverseOverflow { .. } | FinSetError::CodeOverflow { .. } => CliError::Overflow(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(err: CatalogError) -> Self {
        match err {
            CatalogError::FinSet(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MatchError> for CliError {
    fn from(err: MatchError) -> Self {
        match err {
            MatchError::CertificateFailed(msg) => CliError::Certificate(msg),
            other => CliError::Exhausted(other.to_string()),
        }
    }
}
