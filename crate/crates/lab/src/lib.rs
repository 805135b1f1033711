//! Configuration-driven verification runs for `hecke-core`.
//!
//! A run reads one JSON document ([`config::RunConfig`]), evaluates the
//! selected check, and writes a CSV table with a JSON sidecar
//! ([`report::emit_report`]). [`selfcheck::selfcheck`] runs the built-in
//! suite without a configuration.

pub mod config;
pub mod report;
pub mod run;
pub mod selfcheck;

pub use config::{parse_config, RunConfig};
pub use report::{emit_report, Report};
pub use run::{run, Command, Outcome, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] hecke_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LabError::Invalid(msg.into())
    }
}
