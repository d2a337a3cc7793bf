use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty after whitespace normalization")]
    EmptyInput,

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The predictor could not be reached. Callers may retry.
    #[error("predictor backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("predictor protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("requested {requested} records from {what} but only {available} are available")]
    Count {
        what: String,
        requested: usize,
        available: usize,
    },

    #[error("backend retries exhausted after record {last_completed:?}: {source}")]
    BackendExhausted {
        last_completed: Option<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn protocol(msg: impl Into<String>) -> Self {
        Error::ProtocolViolation(msg.into())
    }

    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::BackendUnavailable(_))
    }
}
