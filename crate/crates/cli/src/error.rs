use std::fmt;
use std::path::{Path, PathBuf};

/// Failures mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    NotConverged {
        steps: usize,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::NotConverged { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::NotConverged { steps } => {
                write!(f, "training did not converge within {steps} steps")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<qperceptron::Error> for CliError {
    fn from(e: qperceptron::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
