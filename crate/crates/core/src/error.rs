/// Harness error, classified by the exit code the CLI maps it to.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or user input (exit code 1).
    #[error("{0}")]
    Validation(String),
    /// A prepare hook or measured command failed (exit code 2).
    #[error("{0}")]
    Execution(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 1,
            Error::Execution(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
