//! Channel files.
//!
//! JSON: `{"n": 3, "m": 3, "entries": [["5/8", 0.125, "1/4"], ...]}`, rows
//! are inputs. CSV: one row per input, no header, `#` starts a comment.
//! Entries are `p/q` strings or decimals and are read exactly.

use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::channel::{Channel, Validation};
use crate::error::{Error, Result};
use crate::number::{format_rational, parse_rational};
use crate::order::WeakOrderMatrix;

fn entry_from_json(v: &Value, row: usize, col: usize) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(num) => num.to_string(),
        other => {
            return Err(Error::Parse(format!(
                "entry ({row}, {col}) must be a string or number, got {other}"
            )))
        }
    };
    parse_rational(&text).map_err(|e| Error::Parse(format!("entry ({row}, {col}): {e}")))
}

fn dim_field(obj: &Value, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("missing or invalid {key:?}")))
}

/// Reads the raw grid of a JSON channel document, checking `n` and `m`.
pub fn parse_grid_json(text: &str) -> Result<Vec<Vec<BigRational>>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = dim_field(&doc, "n")?;
    let m = dim_field(&doc, "m")?;
    let rows = doc
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"entries\" array".into()))?;
    if rows.len() != n {
        return Err(Error::Parse(format!("\"n\" is {n} but entries has {} rows", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::Parse(format!("row {} is not an array", i + 1)))?;
            if cells.len() != m {
                return Err(Error::Parse(format!(
                    "\"m\" is {m} but row {} has {} entries",
                    i + 1,
                    cells.len()
                )));
            }
            cells
                .iter()
                .enumerate()
                .map(|(j, v)| entry_from_json(v, i + 1, j + 1))
                .collect()
        })
        .collect()
}

pub fn parse_grid_csv(text: &str) -> Result<Vec<Vec<BigRational>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut grid = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, s)| {
                parse_rational(s).map_err(|e| Error::Parse(format!("entry ({}, {}): {e}", i + 1, j + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        grid.push(row);
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` means CSV; anything else is sniffed, JSON when it opens with `{`.
    pub fn detect(path: &Path, text: &str) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ if text.trim_start().starts_with('{') => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub fn parse_grid(text: &str, format: Format) -> Result<Vec<Vec<BigRational>>> {
    match format {
        Format::Json => parse_grid_json(text),
        Format::Csv => parse_grid_csv(text),
    }
}

pub fn parse_channel(text: &str, format: Format, rules: &Validation) -> Result<Channel> {
    Channel::validate(parse_grid(text, format)?, rules)
}

pub fn read_channel(path: &Path, rules: &Validation) -> Result<Channel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_channel(&text, Format::detect(path, &text), rules)
}

/// JSON document with every entry as an exact `p/q` string.
pub fn channel_to_json(ch: &Channel) -> Value {
    json!({
        "n": ch.n_inputs(),
        "m": ch.m_outputs(),
        "entries": ch
            .rows()
            .iter()
            .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn channel_to_csv(ch: &Channel) -> String {
    let mut out = String::new();
    for row in ch.rows() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_channel(ch: &Channel, path: &Path, format: Format) -> Result<()> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&channel_to_json(ch)).expect("json value"),
        Format::Csv => channel_to_csv(ch),
    };
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// `{"columns": [[rank, ...], ...]}`, one rank vector per output.
pub fn weak_order_matrix_to_json(o: &WeakOrderMatrix) -> Value {
    serde_json::to_value(o).expect("weak-order matrix serializes")
}

pub fn weak_order_matrix_from_json(text: &str) -> Result<WeakOrderMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
