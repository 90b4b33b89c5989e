use thiserror::Error;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration file, override or parameter value.
    #[error("config error: {0}")]
    Config(String),
    /// A property-check experiment exceeded its tolerance.
    #[error("property check failed: {0}")]
    Property(String),
    /// Reading or writing a file failed.
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    /// Exit code: 2 config, 3 property check, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Property(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<qwalk_core::Error> for CliError {
    fn from(e: qwalk_core::Error) -> Self {
        CliError::Config(format!("invalid parameters: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
