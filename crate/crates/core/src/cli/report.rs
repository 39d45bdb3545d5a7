//! Output plumbing: versioned CSV tables, JSON documents and failure lists.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Bumped whenever a CSV column set changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Twelve significant digits, shortest form; exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_f(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if (1e-4..1e15).contains(&rounded.abs()) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub subject: String,
    pub detail: String,
}

impl Failure {
    pub fn new(check: &str, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure {
            check: check.to_string(),
            subject: subject.into(),
            detail: detail.into(),
        }
    }
}

/// A CSV table with a leading schema comment and optional trailing comments.
pub struct Table {
    command: &'static str,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl Table {
    pub fn new<S: AsRef<str>>(command: &'static str, header: &[S]) -> Self {
        Table {
            command,
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn footer(&mut self, line: String) {
        self.footer.push(line);
    }

    pub fn render(&self) -> Result<Vec<u8>> {
        let mut buf =
            format!("# cocycle-lab {} schema={SCHEMA_VERSION}\n", self.command).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.header).map_err(csv_err)?;
            for r in &self.rows {
                w.write_record(r).map_err(csv_err)?;
            }
            w.flush()?;
        }
        for line in &self.footer {
            buf.extend_from_slice(format!("# {line}\n").as_bytes());
        }
        Ok(buf)
    }
}

fn csv_err(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// Rows of the generic check table used by `cocycle`, `interpolate` and `classify`.
pub const CHECK_HEADER: [&str; 7] = ["check", "subject", "lhs", "rhs", "value", "bound", "passed"];

pub struct CheckRow {
    pub check: &'static str,
    pub subject: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub value: Option<f64>,
    pub bound: Option<f64>,
    pub passed: Option<bool>,
}

impl CheckRow {
    pub fn info(check: &'static str, subject: impl Into<String>, value: f64) -> Self {
        CheckRow {
            check,
            subject: subject.into(),
            lhs: None,
            rhs: None,
            value: Some(value),
            bound: None,
            passed: None,
        }
    }

    pub fn cells(&self) -> Vec<String> {
        vec![
            self.check.to_string(),
            self.subject.clone(),
            fmt_opt(self.lhs),
            fmt_opt(self.rhs),
            fmt_opt(self.value),
            fmt_opt(self.bound),
            self.passed.map(|b| b.to_string()).unwrap_or_default(),
        ]
    }
}

pub fn check_table(command: &'static str, rows: &[CheckRow]) -> Table {
    let mut t = Table::new(command, &CHECK_HEADER);
    for r in rows {
        t.push(r.cells());
    }
    t
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
