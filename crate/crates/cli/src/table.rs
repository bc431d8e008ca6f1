//! Numeric tables and their CSV/JSON serialization.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::OutputFormat;
use crate::error::CliError;

/// A named table of numbers; `meta` lines go into the file header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Header fields shared by every file of a run.
#[derive(Debug, Clone)]
pub struct Header {
    pub task: String,
    pub config: serde_json::Value,
    pub deterministic: bool,
}

const TOLERANCES: &str =
    "quadrature abs 1e-9 rel 1e-9; turning points to machine precision; Fermi energy abs 1e-15; scan 4096 points";

impl Header {
    fn lines(&self, table: &Table) -> Vec<(String, String)> {
        let mut out = vec![
            (
                "generator".to_string(),
                format!("chain {}", env!("CARGO_PKG_VERSION")),
            ),
            ("chain-core".to_string(), chain_core::VERSION.to_string()),
            ("task".to_string(), self.task.clone()),
            ("table".to_string(), table.name.clone()),
            ("config".to_string(), self.config.to_string()),
            ("tolerances".to_string(), TOLERANCES.to_string()),
        ];
        if !self.deterministic {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            out.push(("generated_unix".to_string(), now.to_string()));
        }
        out.extend(table.meta.iter().cloned());
        out
    }
}

/// 17 significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn to_csv(table: &Table, header: &Header) -> String {
    let mut s = String::new();
    for (k, v) in header.lines(table) {
        let _ = writeln!(s, "# {k}: {v}");
    }
    let _ = writeln!(s, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

pub fn to_json(table: &Table, header: &Header) -> String {
    let head: serde_json::Map<String, serde_json::Value> = header
        .lines(table)
        .into_iter()
        .map(|(k, v)| {
            let value = if k == "config" {
                header.config.clone()
            } else {
                serde_json::Value::String(v)
            };
            (k, value)
        })
        .collect();
    // non-finite values become null
    let rows: Vec<Vec<serde_json::Value>> = table
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| json!(if v.is_finite() { Some(v) } else { None }))
                .collect()
        })
        .collect();
    let doc = json!({ "header": head, "columns": table.columns, "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc).unwrap_or_default();
    text.push('\n');
    text
}

/// Writes each table to `dir/<name>.<ext>` and returns the paths.
pub fn write_tables(
    dir: &Path,
    tables: &[Table],
    header: &Header,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for t in tables {
        let (ext, text) = match format {
            OutputFormat::Csv => ("csv", to_csv(t, header)),
            OutputFormat::Json => ("json", to_json(t, header)),
        };
        let path = dir.join(format!("{}.{ext}", t.name));
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
