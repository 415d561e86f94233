//! Versioned JSON documents and fixed-precision CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level JSON wrapper carrying the schema version and payload kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema_version: u32,
    pub kind: String,
    pub data: T,
}

pub fn to_json<T: Serialize>(kind: &str, data: &T) -> Result<String> {
    let doc = Document { schema_version: SCHEMA_VERSION, kind: kind.to_string(), data };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    #[derive(Deserialize)]
    struct Header {
        schema_version: u32,
        kind: String,
    }
    let h: Header = serde_json::from_str(text)?;
    if h.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(h.schema_version));
    }
    if h.kind != kind {
        return Err(Error::Invalid(format!("expected a {kind} document, found {}", h.kind)));
    }
    let doc: Document<T> = serde_json::from_str(text)?;
    Ok(doc.data)
}

pub fn read_json<T: DeserializeOwned>(kind: &str, path: &Path) -> Result<T> {
    from_json(kind, &std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    /// Numbers use 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn short(&self) -> String {
        match self {
            Cell::Num(x) if *x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e6) => format!("{x:.3e}"),
            Cell::Num(x) => format!("{x:.10}"),
            c => c.render(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "pass" } else { "FAIL" }.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
    }

    /// Parses a table written by [`Table::to_csv`], recovering numeric cells.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            rows.push(
                rec.iter()
                    .map(|s| {
                        if let Ok(i) = s.parse::<i64>() {
                            Cell::Int(i)
                        } else if s.contains('e') && s.parse::<f64>().is_ok() {
                            Cell::Num(s.parse().unwrap())
                        } else {
                            Cell::Text(s.to_string())
                        }
                    })
                    .collect(),
            );
        }
        Ok(Table { header, rows })
    }

    pub fn pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::short).collect()).collect();
        let mut width: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &cells {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let parts: Vec<String> = items.iter().zip(&width).map(|(s, w)| format!("{s:>w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &self.header);
        for r in &cells {
            line(&mut out, r);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(Cell::Num(0.1).render(), "1.0000000000000001e-1");
        assert_eq!(Cell::Num(-2.0).render().parse::<f64>().unwrap(), -2.0);
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["k", "value", "note"]);
        t.push(vec![1usize.into(), std::f64::consts::PI.into(), "a, b".into()]);
        let s = t.to_csv().unwrap();
        let back = Table::from_csv(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv().unwrap(), s);
    }

    #[test]
    fn schema_is_checked() {
        let s = to_json("thing", &3u32).unwrap();
        assert_eq!(from_json::<u32>("thing", &s).unwrap(), 3);
        assert!(from_json::<u32>("other", &s).is_err());
        let bumped = s.replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(matches!(from_json::<u32>("thing", &bumped), Err(Error::Schema(9))));
    }
}
