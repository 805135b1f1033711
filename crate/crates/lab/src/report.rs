//! CSV reports and their JSON sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;
use crate::LabError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    /// Scientific notation with 17 significant digits for numbers.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn format_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// One table of results plus per-row diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// One JSON object per row (notes, warnings, errors, term counts).
    pub diagnostics: Vec<Value>,
    pub tol: f64,
    /// Rows that exceeded the tolerance or failed to evaluate.
    pub breaches: usize,
}

impl Report {
    pub fn new(command: &str, header: &[&str], tol: f64) -> Self {
        Report {
            command: command.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            diagnostics: Vec::new(),
            tol,
            breaches: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.breaches == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub command: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub passed: bool,
    pub rows: usize,
    pub diagnostics: Vec<Value>,
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`; returns both paths.
pub fn emit_report(
    report: &Report,
    config: Option<&RunConfig>,
    seed: Option<u64>,
    dir: &Path,
    stem: &str,
) -> Result<(PathBuf, PathBuf), LabError> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(&report.header)?;
    for row in &report.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    let side = Sidecar {
        command: report.command.clone(),
        version: hecke_core::VERSION.to_string(),
        config: config.cloned(),
        seed,
        tol: report.tol.is_finite().then_some(report.tol),
        passed: report.passed(),
        rows: report.rows.len(),
        diagnostics: report.diagnostics.clone(),
    };
    fs::write(&json_path, serde_json::to_string_pretty(&side)?)?;
    Ok((csv_path, json_path))
}

/// Reads the configuration echoed in a sidecar.
pub fn sidecar_config(text: &str) -> Result<Option<RunConfig>, LabError> {
    let s: Sidecar = serde_json::from_str(text)?;
    Ok(s.config)
}
