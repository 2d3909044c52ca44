use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("cycle in broader relation: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("incompatible hash codes: {0}")]
    IncompatibleHash(String),

    #[error("invalid {kind} file: {message}")]
    Format { kind: &'static str, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn format(kind: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            kind,
            message: message.into(),
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::DuplicateId(_) => "duplicate-id",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::EmptyCorpus(_) => "empty-corpus",
            Error::UnknownLabel(_) => "unknown-label",
            Error::Cycle(_) => "cycle",
            Error::IncompatibleHash(_) => "incompatible-hash",
            Error::Format { .. } => "format",
            Error::Json(_) => "json",
        }
    }
}
