use std::fmt;

use dgbo_core::Error;

/// Process exit statuses.
pub mod code {
    pub const OK: i32 = 0;
    /// Failed checks, non-converged solves and other runtime failures.
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    /// Numerical instability or loss of conservation integrity.
    pub const INSTABILITY: i32 = 3;
    /// The threshold theorem does not apply (`k <= 2 beta`).
    pub const INAPPLICABLE: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    /// A run finished but its outcome is a failure (e.g. a failed check).
    Failed(String),
    /// Conservation drifted past its limit during an evolution.
    IntegrityBreach(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => code::USAGE,
            CliError::Failed(_) | CliError::Io(_) => code::FAILURE,
            CliError::IntegrityBreach(_) => code::INSTABILITY,
            CliError::Core(e) => match e {
                Error::InvalidGrid(_)
                | Error::InvalidParams(_)
                | Error::InvalidExponent(_)
                | Error::InvalidInput(_)
                | Error::Format(_)
                | Error::Resource { .. } => code::USAGE,
                Error::Instability { .. } => code::INSTABILITY,
                Error::Inapplicable(_) => code::INAPPLICABLE,
                _ => code::FAILURE,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
            CliError::IntegrityBreach(m) => write!(f, "integrity breach: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Core(Error::Instability {
                t_last_good,
                reason,
            }) => {
                write!(
                    f,
                    "instability: {reason} (last good time t = {t_last_good})"
                )
            }
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}
