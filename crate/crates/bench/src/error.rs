use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("dataset error: {0}")]
    Dataset(String),
    #[error(transparent)]
    Core(#[from] psso_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Dataset(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
