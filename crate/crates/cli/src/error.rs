use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 usage, 3 convergence, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Io { .. } | CliError::Output(_) => 4,
        }
    }
}

impl From<moduli_core::Error> for CliError {
    fn from(e: moduli_core::Error) -> Self {
        match e {
            moduli_core::Error::Convergence { .. } | moduli_core::Error::NonMonotone => {
                CliError::Convergence(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
