//! Output formats: CSV result tables with pinned column sets, a nested JSON
//! report, and the plot-data exporter.
//!
//! Formatting is deterministic: floats print in Rust's shortest-roundtrip
//! form, rows keep insertion order, so a fixed (config, seed) pair yields
//! byte-identical files.

use crate::HarnessError;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// A figure-like numeric table inside a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

/// Nested scenario report persisted as JSON next to the flat CSV results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario_id: String,
    pub kind: String,
    pub seed: u64,
    /// Human-readable invariant failures; empty means the run is clean.
    pub failures: Vec<String>,
    pub tables: Vec<Table>,
}

impl RunReport {
    pub fn new(scenario_id: &str, kind: &str, seed: u64) -> Self {
        RunReport {
            scenario_id: scenario_id.to_string(),
            kind: kind.to_string(),
            seed,
            failures: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Flat results file with a pinned header; rows are preformatted strings so
/// each scenario kind controls its exact column set.
pub struct CsvFile {
    header: String,
    lines: Vec<String>,
}

impl CsvFile {
    pub fn new(header: &str) -> Self {
        CsvFile {
            header: header.to_string(),
            lines: Vec::new(),
        }
    }

    pub fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn contents(&self) -> String {
        let mut out = self.header.clone();
        out.push('\n');
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.contents())?;
        Ok(())
    }
}

/// Writes one CSV per table of the report into `out_dir`, named
/// `<scenario_id>__<table>.csv`. A table without rows still produces its
/// header line. Returns the written paths in table order.
pub fn emit_plot_data(report: &RunReport, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::with_capacity(report.tables.len());
    for table in &report.tables {
        let path = out_dir.join(format!("{}__{}.csv", report.scenario_id, table.name));
        std::fs::write(&path, table.to_csv())?;
        written.push(path);
    }
    Ok(written)
}
