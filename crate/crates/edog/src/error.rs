use std::io;
use std::path::PathBuf;

/// Errors of the file-format, experiment and CLI layer.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] edog_core::Error),
    #[error("malformed input in {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// Process exit status: 2 for domain errors, 3 for schema errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(edog_core::Error::Schema(_)) | CliError::Malformed { .. } | CliError::Schema(_) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(path: &str, err: impl std::fmt::Display) -> Self {
        CliError::Malformed {
            path: path.to_string(),
            message: err.to_string(),
        }
    }
}
