use std::path::Path;

use serde_json::json;

use crate::config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{command} needs --{field}")]
    Missing { command: String, field: &'static str },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] spinwire::Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config-parse",
            CliError::Missing { .. } => "missing-field",
            CliError::Io { .. } => "io",
            CliError::Core(e) => e.code(),
        }
    }

    /// Single-line JSON record `{code, message, params}`.
    pub fn record(&self, config: Option<&RunConfig>) -> String {
        let params = config.map_or(serde_json::Value::Null, |c| serde_json::to_value(c).expect("config serializes"));
        json!({ "code": self.code(), "message": self.to_string(), "params": params }).to_string()
    }
}
