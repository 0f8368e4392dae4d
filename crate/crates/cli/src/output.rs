//! CSV tables and summary documents.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::CliError;

/// Column-major table rendered with shortest round-trip float formatting,
/// so identical inputs give identical bytes.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Empty,
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render()))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub results: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Summary {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    /// Non-finite values become `null`.
    pub fn set_f64(&mut self, key: &str, value: f64) {
        let v = serde_json::Number::from_f64(value).map_or(Value::Null, Value::Number);
        self.results.insert(key.to_string(), v);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}

pub struct OutputPaths {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

/// `<stem>.csv` and `<stem>.summary.json`, under `out` when the stem is
/// relative.
pub fn output_paths(out: Option<&Path>, stem: &Path) -> OutputPaths {
    let base = match out {
        Some(dir) if stem.is_relative() => dir.join(stem),
        _ => stem.to_path_buf(),
    };
    let with = |suffix: &str| {
        let mut s = base.clone().into_os_string();
        s.push(suffix);
        PathBuf::from(s)
    };
    OutputPaths {
        csv: with(".csv"),
        summary: with(".summary.json"),
    }
}

pub fn write_outputs(paths: &OutputPaths, table: &Table, summary: &Value) -> Result<(), CliError> {
    let csv = table.to_bytes()?;
    let mut json = serde_json::to_vec_pretty(summary).map_err(|e| CliError::Io(e.to_string()))?;
    json.push(b'\n');
    for p in [&paths.csv, &paths.summary] {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&paths.csv, csv)?;
    std::fs::write(&paths.summary, json)?;
    Ok(())
}
