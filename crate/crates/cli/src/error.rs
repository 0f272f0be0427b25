use thiserror::Error;

/// Errors that stop a command before any verification result exists.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] qtorus_core::Error),
}

impl CliError {
    /// Every error here is a usage or configuration problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
