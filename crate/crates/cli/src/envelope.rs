//! Tabular output shared by every command, rendered as CSV or JSON.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use indexmap::IndexMap;
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Bool(v) => json!(v),
            Cell::Text(v) => json!(v),
        }
    }

    /// CSV text; numbers use the same shortest round-trip form as JSON and
    /// non-finite values become an empty cell.
    fn to_csv(&self) -> String {
        match self {
            Cell::Float(v) if !v.is_finite() => String::new(),
            Cell::Text(v) => v.clone(),
            other => other.to_json().to_string(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct OutputEnvelope {
    pub command: String,
    pub parameters: IndexMap<String, Cell>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra JSON-only fields (e.g. simulation summaries).
    pub summary: Option<Map<String, Value>>,
}

impl OutputEnvelope {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Self {
            command: command.to_string(),
            parameters: IndexMap::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, timestamp: &str) -> String {
        let parameters: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("command".into(), json!(self.command));
        root.insert("parameters".into(), Value::Object(parameters));
        root.insert("columns".into(), json!(self.columns));
        root.insert("rows".into(), Value::Array(rows));
        if let Some(summary) = &self.summary {
            root.insert("summary".into(), Value::Object(summary.clone()));
        }
        root.insert(
            "metadata".into(),
            json!({ "version": env!("CARGO_PKG_VERSION"), "timestamp": timestamp }),
        );
        let mut text =
            serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format, timestamp: &str) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(timestamp),
        }
    }
}

/// Writes to a temporary file beside `path` and renames it into place, so a
/// failed run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
