use std::path::PathBuf;

use crate::image::PgmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller broke an operation's precondition (even window, bad density, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The inputs are well-formed but the quantity is undefined for them.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}: {source}")]
    Pgm {
        path: PathBuf,
        #[source]
        source: PgmError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("pipeline stage `{stage}` failed: {source}")]
    Pipeline {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at_stage(self, stage: impl Into<String>) -> Self {
        Error::Pipeline {
            stage: stage.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by how an operation was invoked rather than by
    /// the data it was given.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Contract(_))
    }
}
