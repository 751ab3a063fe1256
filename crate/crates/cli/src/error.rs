use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] mellin_core::Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for bad input, 1 for computations that could not be certified.
    pub fn exit_code(&self) -> u8 {
        use mellin_core::Error as E;
        match self {
            CliError::Core(E::QuadratureFailure(_)) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
