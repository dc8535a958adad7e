use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid norm specification: {0}")]
    NormSpec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("step size {dt} exceeds the advective bound {limit}")]
    StepSize { dt: f64, limit: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("state rejected: {0}")]
    Rejected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
