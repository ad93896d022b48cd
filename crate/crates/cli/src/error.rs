use thiserror::Error;

use circulant_trees::Error as CoreError;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(CoreError::CapExceeded { .. }) => exit::CAP_EXCEEDED,
            CliError::Core(CoreError::InvalidSpec(_) | CoreError::InvalidArgument(_) | CoreError::Disconnected) => {
                exit::USAGE
            }
            _ => exit::NUMERICAL,
        }
    }
}
