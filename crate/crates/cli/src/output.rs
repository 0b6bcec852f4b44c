use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// One table cell. Exact counts stay strings in every format.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Exact(String),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn exact(value: impl ToString) -> Self {
        Cell::Exact(value.to_string())
    }

    pub fn float(value: Option<f64>) -> Self {
        value.map_or(Cell::Empty, Cell::Float)
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Float(f) => format_float(*f),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Exact(s) | Cell::Text(s) => Value::from(s.as_str()),
            Cell::Float(f) => serde_json::Number::from_f64(*f).map_or(Value::Null, Value::Number),
            Cell::Empty => Value::Null,
        }
    }
}

fn format_float(f: f64) -> String {
    if f != 0.0 && (f.abs() >= 1e7 || f.abs() < 1e-3) {
        format!("{f:.6e}")
    } else {
        format!("{f:.6}")
    }
}

pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: OutputFormat, out: &mut impl Write) -> io::Result<()> {
        match format {
            OutputFormat::Table => self.write_aligned(out),
            OutputFormat::Csv => {
                let mut writer = csv::Writer::from_writer(out);
                writer.write_record(&self.headers)?;
                for row in &self.rows {
                    writer.write_record(row.iter().map(Cell::render))?;
                }
                writer.flush()
            }
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .headers
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.to_json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)
            }
        }
    }

    fn write_aligned(&self, out: &mut impl Write) -> io::Result<()> {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| {
                rendered
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.headers[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: Vec<&str>| -> String {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(self.headers.clone()))?;
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        writeln!(out, "{}", rule.join("-|-"))?;
        for row in &rendered {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}

/// A single named result: bare value in table/CSV mode, `{name: value}` in
/// JSON mode.
pub fn write_scalar(format: OutputFormat, name: &str, value: Cell, out: &mut impl Write) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            let mut obj = Map::new();
            obj.insert(name.to_string(), value.to_json());
            writeln!(out, "{}", Value::Object(obj))
        }
        _ => writeln!(out, "{}", value.render()),
    }
}
