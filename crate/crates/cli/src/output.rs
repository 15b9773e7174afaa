use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::{CliError, Format};

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            // 17 significant digits round-trip a double
            Cell::Num(x) => format!("{:.16e}", if x == 0.0 { 0.0 } else { x }),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => u8::from(b).to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Num(x) => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(i),
            Cell::Flag(b) => Value::Bool(b),
        }
    }
}

/// Rows under named columns; `comments` become `#` lines just below the CSV header.
#[derive(Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        match format {
            Format::Csv => write_with(out, |w| self.write_csv(w)),
            Format::Json => emit_json(&self.to_json(), out),
        }
    }
}

pub fn emit_json(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    write_with(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

pub fn write_with(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    let result = match out {
        Some(path) => File::create(path).and_then(|file| {
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| CliError::Failure(format!("writing output: {e}")))
}
