use std::fmt;

use idxf_core::Error;

/// Exit codes: 0 success, 1 failed check, 2 configuration or input error,
/// 3 numerical failure.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    ChecksFailed(usize),
    Numerical(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Classifies a library error raised while processing user input:
    /// parameter and envelope violations are the caller's, the rest are
    /// numerical.
    pub fn from_input(e: Error) -> Self {
        match e {
            Error::Envelope { .. } | Error::TailNotCovered { .. } => CliError::Config(e.to_string()),
            e if e.is_domain() => CliError::Config(e.to_string()),
            e => CliError::Numerical(e),
        }
    }

    /// Classifies a library error raised inside a verification suite.
    pub fn from_check(e: Error) -> Self {
        if e.is_domain() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numerical(e)
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}
