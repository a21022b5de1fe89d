use std::fmt;
use std::path::Path;

use flowband_core::Error as CoreError;

/// Process exit codes. Stable contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Config = 2,
    Io = 3,
    InsufficientData = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Config,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError {
            kind: ExitKind::Io,
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn code(&self) -> i32 {
        self.kind as i32
    }

    /// Core error raised while processing `context` (usually a file path).
    pub fn from_core(context: &str, err: CoreError) -> Self {
        let kind = match err {
            CoreError::Domain { .. }
            | CoreError::Config { .. }
            | CoreError::TopologyMismatch { .. }
            | CoreError::MissingJoint(_) => ExitKind::Config,
            CoreError::InsufficientData(_)
            | CoreError::UndefinedNormalization(_)
            | CoreError::Degenerate(_)
            | CoreError::NonFinite(_) => ExitKind::InsufficientData,
        };
        CliError {
            kind,
            message: format!("{context}: {err}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;
