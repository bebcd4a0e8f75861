use thiserror::Error;

#[derive(Debug, Error)]
pub enum TelemetryError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown write key")]
    Unauthorized,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, TelemetryError>;

pub(crate) fn validation(msg: impl Into<String>) -> TelemetryError {
    TelemetryError::Validation(msg.into())
}

impl From<serde_json::Error> for TelemetryError {
    fn from(e: serde_json::Error) -> Self {
        TelemetryError::Serialization(e.to_string())
    }
}

impl From<csv::Error> for TelemetryError {
    fn from(e: csv::Error) -> Self {
        TelemetryError::Serialization(e.to_string())
    }
}
