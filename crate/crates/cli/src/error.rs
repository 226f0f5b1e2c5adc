use std::fmt;
use std::io;

/// Command-level failures; usage problems exit with status 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
    Core(duality_core::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<duality_core::Error> for CliError {
    fn from(e: duality_core::Error) -> Self {
        CliError::Core(e)
    }
}
