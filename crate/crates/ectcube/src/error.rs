use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Core(#[from] ectcube_core::Error),

    #[error("direction {index}: {source}")]
    Direction {
        index: usize,
        source: ectcube_core::Error,
    },

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Self::Format(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 for a non-generic direction, 4 for
    /// an oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Direction {
                source: ectcube_core::Error::GenericityViolation { .. },
                ..
            } => 3,
            Error::Core(ectcube_core::Error::GenericityViolation { .. }) => 3,
            Error::OracleMismatch(_) => 4,
            _ => 2,
        }
    }
}
