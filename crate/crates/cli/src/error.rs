use pitaron::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or schema-violating configuration.
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

/// Argument-shape errors from the library count as config errors; the rest
/// are numerical.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::EmptyDimension
            | CoreError::DimensionMismatch { .. }
            | CoreError::InvalidArgument(_)
            | CoreError::NonIncreasingKicks { .. }
            | CoreError::KickAtStart { .. }
            | CoreError::KickAtIntermediate { .. }
            | CoreError::KickedSpec
            | CoreError::OrderTooLarge { .. }
            | CoreError::DegenerateFit(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
