//! Column-oriented figure data and its CSV / JSON serializations.
//!
//! Every number is written with 17 significant digits (`{:.16e}`), which
//! round-trips any `f64` exactly. CSV files carry a single header row; JSON
//! documents have the shape `{"metadata": …, "summary": …, "columns": …}`.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const TOOL_NAME: &str = "qhod";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Scalar results attached to a figure (JSON only).
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: String,
    /// Every parameter as it was resolved, in a stable order.
    pub parameters: Vec<(String, String)>,
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub metadata: Metadata,
    pub summary: Vec<(String, Scalar)>,
    columns: Vec<Column>,
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_number(v: f64) -> String {
    if v.is_finite() {
        format_number(v)
    } else {
        "null".to_string()
    }
}

impl FigureData {
    pub fn new(command: &str, parameters: Vec<(String, String)>) -> Self {
        Self {
            metadata: Metadata {
                command: command.to_string(),
                parameters,
                timestamp: None,
            },
            summary: Vec::new(),
            columns: Vec::new(),
        }
    }

    /// Appends a column; all columns must have equal length.
    pub fn push_column(&mut self, name: &str, values: Vec<f64>) -> Result<(), CliError> {
        if let Some(first) = self.columns.first() {
            if first.values.len() != values.len() {
                return Err(CliError::Internal(format!(
                    "column '{name}' has {} rows, expected {}",
                    values.len(),
                    first.values.len()
                )));
            }
        }
        self.columns.push(Column {
            name: name.to_string(),
            values,
        });
        Ok(())
    }

    pub fn push_summary(&mut self, key: &str, value: Scalar) {
        self.summary.push((key.to_string(), value));
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn summary_value(&self, key: &str) -> Option<&Scalar> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in 0..self.rows() {
            let cells: Vec<String> = self.columns.iter().map(|c| format_number(c.values[row])).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn metadata_json(&self) -> Value {
        let mut params = Map::new();
        for (k, v) in &self.metadata.parameters {
            params.insert(k.clone(), Value::String(v.clone()));
        }
        json!({
            "command": self.metadata.command,
            "tool": TOOL_NAME,
            "tool_version": TOOL_VERSION,
            "timestamp": self.metadata.timestamp,
            "parameters": params,
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"metadata\": ");
        out.push_str(&serde_json::to_string(&self.metadata_json()).expect("metadata serializes"));
        out.push_str(",\n  \"summary\": {");
        for (i, (key, value)) in self.summary.iter().enumerate() {
            let rendered = match value {
                Scalar::Real(v) => json_number(*v),
                Scalar::Int(v) => v.to_string(),
                Scalar::Bool(v) => v.to_string(),
                Scalar::Text(s) => Value::String(s.clone()).to_string(),
            };
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    {}: {rendered}", Value::String(key.clone()));
        }
        out.push_str(if self.summary.is_empty() { "},\n" } else { "\n  },\n" });
        out.push_str("  \"columns\": {");
        for (i, column) in self.columns.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let values: Vec<String> = column.values.iter().map(|v| json_number(*v)).collect();
            let _ = write!(
                out,
                "{sep}\n    {}: [{}]",
                Value::String(column.name.clone()),
                values.join(", ")
            );
        }
        out.push_str(if self.columns.is_empty() {
            "}\n}\n"
        } else {
            "\n  }\n}\n"
        });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
