//! CSV and JSON writers. Every file starts with one `#` line carrying the
//! schema version, the tool version, the command and the resolved
//! configuration as a TOML inline table.

use std::io::{self, Write};

use serde_json::{json, Map, Value as Json};
use toml::{Table, Value};

use crate::config::SCHEMA_VERSION;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
}

impl Cell {
    fn to_json(self) -> Json {
        match self {
            // NaN and infinities map to null
            Cell::Float(x) => serde_json::Number::from_f64(x).map_or(Json::Null, Json::Number),
            Cell::Int(i) => json!(i),
        }
    }
}

/// Floats use 17 significant digits, enough to recover every f64 exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Float(x) => f.write_str(&format_float(*x)),
            Cell::Int(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl DataTable {
    pub fn new(columns: &[&'static str]) -> Self {
        DataTable {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| Cell::Float(x)).collect());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: String,
    pub config: Table,
}

impl Header {
    pub fn line(&self) -> String {
        format!(
            "# spinflip schema_version={SCHEMA_VERSION} version={VERSION} command={} config={}",
            self.command,
            Value::Table(self.config.clone())
        )
    }
}

pub fn write_csv(w: &mut dyn Write, header: &Header, table: &DataTable) -> io::Result<()> {
    let mut w = io::BufWriter::new(w);
    writeln!(w, "{}", header.line())?;
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

fn toml_to_json(v: &Value) -> Json {
    match v {
        Value::String(s) => json!(s),
        Value::Integer(i) => json!(i),
        Value::Float(f) => serde_json::Number::from_f64(*f).map_or(Json::Null, Json::Number),
        Value::Boolean(b) => json!(b),
        Value::Datetime(d) => json!(d.to_string()),
        Value::Array(a) => Json::Array(a.iter().map(toml_to_json).collect()),
        Value::Table(t) => Json::Object(
            t.iter()
                .map(|(k, v)| (k.clone(), toml_to_json(v)))
                .collect(),
        ),
    }
}

/// JSON mirror of a CSV table: metadata plus one object per row.
pub fn to_json(header: &Header, table: &DataTable) -> Json {
    let rows: Vec<Json> = table
        .rows
        .iter()
        .map(|r| {
            let obj: Map<String, Json> = table
                .columns
                .iter()
                .zip(r)
                .map(|(c, v)| (c.to_string(), v.to_json()))
                .collect();
            Json::Object(obj)
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "version": VERSION,
        "command": header.command,
        "config": toml_to_json(&Value::Table(header.config.clone())),
        "columns": table.columns,
        "rows": rows,
    })
}

pub fn write_json(w: &mut dyn Write, header: &Header, table: &DataTable) -> io::Result<()> {
    let mut w = io::BufWriter::new(w);
    serde_json::to_writer_pretty(&mut w, &to_json(header, table))?;
    writeln!(w)?;
    w.flush()
}
