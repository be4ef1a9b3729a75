//! Tabular output as a JSON envelope or CSV.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

pub const FORMAT_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Exact value (integer or `num/den`), always written as a string.
    Exact(String),
    Int(u64),
    /// Floating approximation; `None` is written as null / empty.
    Approx(Option<f64>),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn exact(v: impl ToString) -> Self {
        Cell::Exact(v.to_string())
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => Value::from(*v),
            Cell::Approx(Some(v)) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Approx(None) => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Approx(Some(v)) => v.to_string(),
            Cell::Approx(None) => String::new(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Result of one command: the inputs that produced it and a table of rows.
#[derive(Debug, Clone)]
pub struct Envelope {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Envelope {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Envelope {
            command,
            parameters: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &'static str, value: impl ToString) -> &mut Self {
        self.parameters.push((name, value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let parameters: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut env = Map::new();
        env.insert("command".into(), Value::String(self.command.into()));
        env.insert("parameters".into(), Value::Object(parameters));
        env.insert("rows".into(), Value::Array(rows));
        env.insert("format_version".into(), Value::String(FORMAT_VERSION.into()));
        Value::Object(env)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::to_csv))?;
                }
                w.flush()
            }
        }
    }
}
