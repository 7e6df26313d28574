use thiserror::Error;

/// Failures of an experiment run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Core(#[from] symfam_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric(_) => 3,
            RunError::Check(_) => 4,
            RunError::Core(_) | RunError::Io(_) => 1,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
