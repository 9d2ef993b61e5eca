use std::path::Path;

use thiserror::Error;

/// Problems with the input files, as opposed to invalid flags.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema: {0}")]
    Schema(String),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("column `{column}`, line {line}: cannot read `{value}` as a number")]
    NotNumeric { column: String, line: u64, value: String },
    #[error(transparent)]
    Engine(#[from] metalp::Error),
}

impl InputError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        InputError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
