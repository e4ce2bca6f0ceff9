use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("mismatch against expected values: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Core(#[from] hypermirror::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed input: {0}")]
    Input(#[from] serde_json::Error),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io(_) | Self::Input(_) => 1,
            Self::Core(hypermirror::Error::InvalidInput(_) | hypermirror::Error::UnsupportedOrder(_)) => 1,
            Self::Mismatch(_) => 2,
            Self::Core(_) | Self::Csv(_) => 3,
        }
    }
}
