use thiserror::Error;

/// Error type of the harness; each variant maps to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Validation(String),

    #[error("tolerance exceeded: {0}")]
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Tolerance(_) => 3,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(message.into())
    }
}

impl From<qlg_core::LatticeError> for CliError {
    fn from(err: qlg_core::LatticeError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<qlg_reference::ReferenceError> for CliError {
    fn from(err: qlg_reference::ReferenceError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<qlg_spin::SpinError> for CliError {
    fn from(err: qlg_spin::SpinError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Validation(format!("i/o error: {err}"))
    }
}
