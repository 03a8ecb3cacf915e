use std::path::PathBuf;

use thiserror::Error;

/// Everything that stops a command before it produces a report. All of these
/// exit with [`Status::Input`](crate::Status::Input).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: hyperspectra::Error,
    },
    #[error("{}: {message}", path.display())]
    Weights { path: PathBuf, message: String },
    #[error("cannot generate `{spec}`: {source}")]
    Generate {
        spec: String,
        source: hyperspectra::Error,
    },
    #[error("cannot serialize output: {0}")]
    Json(#[from] serde_json::Error),
}
