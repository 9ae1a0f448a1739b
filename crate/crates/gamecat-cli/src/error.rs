//! Command failures and their process exit codes.

use gamecat_core::GameError;

/// Exit code when every check passes.
pub const EXIT_PASS: u8 = 0;
/// Exit code when a check fails.
pub const EXIT_FAIL: u8 = 1;
/// Exit code for malformed input.
pub const EXIT_INPUT: u8 = 2;
/// Exit code when an enumeration cap is exceeded.
pub const EXIT_CAP: u8 = 3;
/// Exit code for inputs outside the supported fragment.
pub const EXIT_UNSUPPORTED: u8 = 4;

/// A failure that ends a command.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The input is malformed; the location names the file and field.
    #[error("{location}: {reason}")]
    Input { location: String, reason: String },
    /// An enumeration ran past the cap.
    #[error("{0}")]
    Cap(String),
    /// The input needs a feature outside the supported fragment.
    #[error("{0}")]
    Unsupported(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn input(location: impl Into<String>, reason: impl Into<String>) -> CliError {
        CliError::Input { location: location.into(), reason: reason.into() }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> CliError {
        CliError::Io { path: path.into(), source }
    }

    /// Wraps an engine error raised while reading the named input.
    pub fn from_game(location: impl Into<String>, e: GameError) -> CliError {
        match e {
            GameError::Cap { .. } => CliError::Cap(e.to_string()),
            GameError::Unsupported { .. } => CliError::Unsupported(e.to_string()),
            other => CliError::input(location, other.to_string()),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } | CliError::Io { .. } => EXIT_INPUT,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
