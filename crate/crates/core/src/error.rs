use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the coupler pipeline.
#[derive(Debug, Error)]
pub enum CouplerError {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("parse error{}: {message}", location(.line, .key))]
    Parse {
        line: Option<usize>,
        key: Option<String>,
        message: String,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("Fock-space truncation error: {0}")]
    Truncation(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn location(line: &Option<usize>, key: &Option<String>) -> String {
    match (line, key) {
        (Some(l), Some(k)) => format!(" at line {l} (key `{k}`)"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(k)) => format!(" (key `{k}`)"),
        (None, None) => String::new(),
    }
}

impl CouplerError {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        CouplerError::Parse {
            line: None,
            key: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(line: Option<usize>, key: &str, message: impl Into<String>) -> Self {
        CouplerError::Parse {
            line,
            key: Some(key.to_string()),
            message: message.into(),
        }
    }
}

pub type Result<T, E = CouplerError> = std::result::Result<T, E>;
