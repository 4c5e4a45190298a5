use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_PROPERTY: u8 = 4;
const EXIT_IO: u8 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spbvp_core::Error),
    #[error("Newton did not converge for {0}")]
    NotConverged(String),
    #[error("failing suites: {}", .0.join(", "))]
    PropertyFailure(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use spbvp_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NotConverged(_) | CliError::Core(E::SingularPivot { .. }) => {
                EXIT_NOT_CONVERGED
            }
            CliError::Core(_) => EXIT_USAGE,
            CliError::PropertyFailure(_) => EXIT_PROPERTY,
            CliError::Io { .. } | CliError::Csv(_) => EXIT_IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
