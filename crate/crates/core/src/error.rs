use thiserror::Error;

/// Errors raised while building or evaluating distributions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distribution spec: {0}")]
    InvalidSpec(String),

    #[error("lambda = {lambda} lies outside the Mellin domain {domain}")]
    OutOfDomain { lambda: f64, domain: String },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("density unavailable for {0}")]
    DensityUnavailable(String),

    #[error("sampler unavailable for {0}")]
    SamplerUnavailable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
