use std::io;
use std::path::PathBuf;

use sobolev_trace::TraceError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InputError = 2,
    NumericalFailure = 3,
    Unsupported = 4,
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Input(_) | CliError::Io { .. } => ExitStatus::InputError,
            CliError::Trace(TraceError::Numerical(_)) => ExitStatus::NumericalFailure,
            CliError::Trace(TraceError::Unsupported(_)) => ExitStatus::Unsupported,
            CliError::Trace(_) => ExitStatus::InputError,
        }
    }
}
