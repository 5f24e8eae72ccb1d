use rlim_core::coherence::CoherenceError;
use rlim_core::prosys::SystemError;
use rlim_core::walks::WalkError;
use rlim_core::zmodule::ZError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    System { path: String, source: SystemError },
    #[error("{path}: {source}")]
    Coherence { path: String, source: CoherenceError },
    #[error("{path}: {source}")]
    Walk { path: String, source: WalkError },
    #[error("{path}: {source}")]
    Linear { path: String, source: ZError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { path: path.into(), message: message.into() }
    }

    /// 1 invalid input, 2 cap exceeded, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        let (cap, verification) = match self {
            CliError::System { source, .. } => (source.is_cap(), source.is_verification()),
            CliError::Coherence { source, .. } => (source.is_cap(), source.is_verification()),
            CliError::Walk { source, .. } => (source.is_cap(), source.is_verification()),
            CliError::Linear { source, .. } => (false, matches!(source, ZError::Internal(_))),
            _ => (false, false),
        };
        if verification {
            3
        } else if cap {
            2
        } else {
            1
        }
    }
}

/// Attaches a document path to a core error.
pub trait AtPath<T> {
    fn at(self, path: &str) -> Result<T, CliError>;
}

impl<T> AtPath<T> for Result<T, SystemError> {
    fn at(self, path: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::System { path: path.into(), source })
    }
}

impl<T> AtPath<T> for Result<T, CoherenceError> {
    fn at(self, path: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Coherence { path: path.into(), source })
    }
}

impl<T> AtPath<T> for Result<T, WalkError> {
    fn at(self, path: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Walk { path: path.into(), source })
    }
}

impl<T> AtPath<T> for Result<T, ZError> {
    fn at(self, path: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Linear { path: path.into(), source })
    }
}
