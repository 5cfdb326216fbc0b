use sqw_core::WalkError;
use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] WalkError),
    #[error("full state needs {needed} amplitudes, above the memory cap of {cap} (raise --memory-cap or use --mode reduced)")]
    MemoryCap { needed: usize, cap: usize },
    #[error("invalid metadata: {0}")]
    Metadata(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for failed checks, 2 for anything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            _ => 2,
        }
    }
}
