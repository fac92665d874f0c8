//! CSV and manifest writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use duplex_core::{Cell, Column, ExperimentTable};
use serde::{Deserialize, Serialize};

use crate::params::Params;
use crate::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn format_cell(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Text(s) => s.clone(),
    }
}

/// Header row of column names, then one line per row.
pub fn to_csv(table: &ExperimentTable) -> String {
    let mut out = String::new();
    let header: Vec<&str> = table.schema.iter().map(|c| c.name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(format_cell).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Written next to every output; feeding it back through `--config`
/// reproduces the CSV byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub resolved_config: Params,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    pub seed: u64,
    pub schema: Vec<Column>,
    pub metadata: std::collections::BTreeMap<String, String>,
}

pub fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
