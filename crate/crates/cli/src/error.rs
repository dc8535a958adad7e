use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("instability at t = {t}: {reason}")]
    Instability { t: f64, reason: String, dump: Option<PathBuf> },
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("plot: {0}")]
    Plot(String),
    #[error(transparent)]
    Core(#[from] strata_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Instability { .. } => 3,
            CliError::Io { .. } | CliError::Plot(_) => 4,
            CliError::Core(e) => match e {
                strata_core::Error::Io(_) | strata_core::Error::Json(_) => 4,
                strata_core::Error::StepSize { .. } => 3,
                _ => 2,
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
