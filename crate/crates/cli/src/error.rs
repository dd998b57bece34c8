use std::path::PathBuf;

use cellcov_core::ModelError;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {}{message}", key.as_ref().map(|k| format!("`{k}`: ")).unwrap_or_default())]
    Config { key: Option<String>, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("compare: {0}")]
    Compare(String),
}

impl CliError {
    pub fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self::Config {
            key: Some(key.to_string()),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config { .. } => "config",
            Self::Model(_) => "model",
            Self::Io { .. } => "io",
            Self::Csv(_) => "csv",
            Self::Compare(_) => "compare",
        }
    }

    /// The one-line JSON object printed on stderr.
    pub fn to_json(&self) -> String {
        let key = match self {
            Self::Config { key, .. } => key.clone(),
            _ => None,
        };
        json!({ "error": { "kind": self.kind(), "key": key, "message": self.to_string() } }).to_string()
    }
}
