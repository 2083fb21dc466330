use std::io::{self, Write};

use clap::ValueEnum;
use etaq_core::Rational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i128),
    Text(String),
    Rat(Rational),
    Bool(bool),
    Empty,
}

impl Cell {
    fn exact(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Rat(q) => q.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn approx(&self) -> String {
        match self {
            Cell::Rat(q) if !q.is_integer() => significant(q.to_f64().unwrap_or(f64::NAN), 6),
            _ => self.exact(),
        }
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n as i128)
    }
}

impl From<i64> for Cell {
    fn from(n: i64) -> Self {
        Cell::Int(n as i128)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i128)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Rational> for Cell {
    fn from(q: Rational) -> Self {
        Cell::Rat(q)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `x` rounded to `digits` significant digits, in plain decimal notation.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// A command's payload in every output form.
pub struct Output {
    pub result: Value,
    pub table: Table,
    /// Replaces the table in text mode.
    pub text: Option<String>,
    pub diagnostics: Vec<String>,
    /// A verification ran and failed.
    pub failed: bool,
}

impl Output {
    pub fn new(result: Value, table: Table) -> Self {
        Self {
            result,
            table,
            text: None,
            diagnostics: Vec::new(),
            failed: false,
        }
    }
}

/// `{command, params, result, diagnostics}`; `serde_json` maps keep keys sorted.
pub fn envelope(command: &str, params: Map<String, Value>, out: &Output) -> Value {
    json!({
        "command": command,
        "params": Value::Object(params),
        "result": out.result,
        "diagnostics": out.diagnostics,
    })
}

pub fn emit(format: Format, command: &str, params: Map<String, Value>, out: &Output) -> io::Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&envelope(command, params, out))?;
            writeln!(w, "{text}")?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&out.table.headers)?;
            for row in &out.table.rows {
                csv.write_record(row.iter().map(Cell::exact))?;
            }
            csv.flush()?;
            drop(csv);
            print_diagnostics(&out.diagnostics);
        }
        Format::Text => {
            match &out.text {
                Some(text) => writeln!(w, "{text}")?,
                None => write_aligned(&mut w, &out.table)?,
            }
            print_diagnostics(&out.diagnostics);
        }
    }
    Ok(())
}

const SHOWN_DIAGNOSTICS: usize = 3;

fn print_diagnostics(diagnostics: &[String]) {
    for d in diagnostics.iter().take(SHOWN_DIAGNOSTICS) {
        eprintln!("note: {d}");
    }
    if diagnostics.len() > SHOWN_DIAGNOSTICS {
        eprintln!(
            "note: {} more; `--format json` lists them all",
            diagnostics.len() - SHOWN_DIAGNOSTICS
        );
    }
}

fn write_aligned(w: &mut impl Write, table: &Table) -> io::Result<()> {
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| row.iter().map(Cell::approx).collect())
        .collect();
    let widths: Vec<usize> = (0..table.headers.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([table.headers[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: Vec<&str>| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, &n)| format!("{s:<n$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(w, "{}", line(table.headers.clone()))?;
    for row in &cells {
        writeln!(w, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
