use thiserror::Error;

#[derive(Debug, Error)]
pub enum GffError {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("numerical failure: {0}")]
    Numerics(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GffError>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(GffError::Argument(msg.into()))
}

pub(crate) fn geometry<T>(msg: impl Into<String>) -> Result<T> {
    Err(GffError::Geometry(msg.into()))
}
