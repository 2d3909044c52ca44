use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] xlingsim_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Config(String),

    #[error("unknown language `{0}`")]
    UnknownLanguage(String),

    #[error("missing input: {0}")]
    Missing(String),

    #[error("{0}")]
    Overlap(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Config(_) => "config",
            CliError::UnknownLanguage(_) => "unknown-language",
            CliError::Missing(_) => "missing-input",
            CliError::Overlap(_) => "heldout-overlap",
            CliError::Json(_) => "json",
        }
    }
}
