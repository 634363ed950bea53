use std::path::PathBuf;

use credit_curve::CreditError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Row { path: PathBuf, line: u64, message: String },
    #[error("{0}")]
    Input(String),
    #[error("underdetermined fit: {0} (pass --allow-underdetermined to accept)")]
    Underdetermined(String),
    #[error("fit did not converge: {0}")]
    NoConvergence(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] CreditError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoConvergence(_) | CliError::Core(CreditError::NoConvergence { .. }) => 3,
            _ => 2,
        }
    }

    pub(crate) fn row(path: &std::path::Path, line: u64, message: impl Into<String>) -> Self {
        CliError::Row { path: path.to_path_buf(), line, message: message.into() }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
