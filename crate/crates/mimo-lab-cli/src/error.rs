//! CLI error type and the exit-code contract.
//!
//! * `0` — success (including `--help` / `--version`);
//! * `1` — the request was invalid: bad flags, malformed scenario files,
//!   configurations that fail validation, formulas asked outside their
//!   domain;
//! * `2` — the request was valid but execution failed: numerical
//!   breakdowns, I/O errors, serialization failures.

use std::fmt;

use mimo_lab_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Io(std::io::Error),
    Json(serde_json::Error),
    /// CLI-level validation problem (bad flag combination, unknown case...).
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(
                CoreError::InvalidConfig(_) | CoreError::Scenario(_) | CoreError::Domain(_),
            ) => 1,
            CliError::Core(CoreError::Numerical(_)) => 2,
            CliError::Io(_) | CliError::Json(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Json(e) => write!(f, "serialization error: {e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
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
        CliError::Json(e)
    }
}
