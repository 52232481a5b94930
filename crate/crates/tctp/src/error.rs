use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors of the command-line front end. Each kind has a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    Infeasible(String),
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("unknown method `{0}` (expected oracle, dp2, fptas, greedy, localsearch or multistart)")]
    UnknownMethod(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
    pub const SIZE_GUARD: u8 = 5;
    pub const UNKNOWN_METHOD: u8 = 6;
    pub const VERIFICATION_FAILED: u8 = 7;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => Self::IO,
            CliError::Usage(_) => Self::USAGE,
            CliError::Parse(_) => Self::PARSE,
            CliError::Infeasible(_) => Self::INFEASIBLE,
            CliError::SizeGuard(_) => Self::SIZE_GUARD,
            CliError::UnknownMethod(_) => Self::UNKNOWN_METHOD,
            CliError::VerificationFailed(_) => Self::VERIFICATION_FAILED,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
