use std::io;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("artifact {}: {message}", path.display())]
    Artifact { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] peelgraph_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn artifact(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Artifact { path: path.into(), message: message.into() }
    }

    /// Process exit code for the CLI: 1 for malformed input, 2 for I/O and
    /// missing or inconsistent artifacts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 1,
            _ => 2,
        }
    }
}
