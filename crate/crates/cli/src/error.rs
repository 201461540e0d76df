use std::path::PathBuf;

use thiserror::Error;

/// A failed manifest or task. Every variant names where it happened
/// (`manifest` or `task N (kind)`) and the offending field.
#[derive(Debug, Error)]
pub enum CliError {
    /// The manifest does not match the schema.
    #[error("{context}: {field}: {message}")]
    Schema {
        context: String,
        field: String,
        message: String,
    },
    /// The data is rejected, or a task's validity gate failed.
    #[error("{context}: {field}: {message}")]
    Invalid {
        context: String,
        field: String,
        message: String,
    },
    /// Evaluation or quadrature broke down.
    #[error("{context}: {field}: {message}")]
    Numeric {
        context: String,
        field: String,
        message: String,
    },
    #[error("{context}: cannot write {}: {source}", path.display())]
    Write {
        context: String,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema { .. } => 2,
            CliError::Invalid { .. } => 3,
            CliError::Numeric { .. } | CliError::Write { .. } => 4,
        }
    }
}
