use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid nef partition: {0}")]
    NefPartition(String),
    #[error("malformed series: {0}")]
    MalformedSeries(String),
    #[error("search failure: {0}")]
    SearchFailure(String),
    #[error("gauge error: residual z-dependence of size {0}")]
    Gauge(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("scenario error: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
