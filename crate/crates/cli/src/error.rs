use std::fmt;

use spinchain_core::ErrorKind;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(spinchain_core::Error),
    Io(std::io::Error),
    /// Verification ran to completion but `failed` cases missed their tolerance.
    Verification { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Domain => EXIT_DOMAIN,
                ErrorKind::Solver => EXIT_SOLVER,
            },
            CliError::Verification { .. } => EXIT_VERIFY_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Core(e) => match e.kind() {
                ErrorKind::Domain => write!(f, "domain error: {e}"),
                ErrorKind::Solver => write!(f, "solver error: {e}"),
            },
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Verification { failed } => write!(f, "verification failed: {failed} case(s) out of tolerance"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<spinchain_core::Error> for CliError {
    fn from(e: spinchain_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("malformed CSV input: {e}"))
    }
}
