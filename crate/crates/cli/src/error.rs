use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{message}")]
    Validation { message: String, diagnostics: Vec<String> },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation { message: message.into(), diagnostics: Vec::new() }
    }

    /// 1 for parse and usage problems, 2 for failed mathematical checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            _ => 1,
        }
    }
}
