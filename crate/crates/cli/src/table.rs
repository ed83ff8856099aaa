//! Tabular output as CSV or JSON.

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row does not match the table schema");
        self.rows.push(row);
    }
}

/// RFC 4180 quoting: only fields with a comma, quote or line break are quoted.
fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
        Cell::Num(v) => v.to_string(),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => quote(s),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Int(v) => Value::from(*v),
        Cell::Text(s) => Value::from(s.as_str()),
    }
}

pub fn emit_table(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = table.columns.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",");
            out.push_str("\r\n");
            for row in &table.rows {
                out.push_str(&row.iter().map(csv_cell).collect::<Vec<_>>().join(","));
                out.push_str("\r\n");
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (name, cell) in table.columns.iter().zip(row) {
                        obj.insert(name.to_string(), json_cell(cell));
                    }
                    Value::Object(obj)
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&rows).expect("JSON values always serialize");
            out.push('\n');
            out
        }
    }
}
