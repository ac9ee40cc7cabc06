//! System files and JSON reports.
//!
//! Two system formats are supported:
//!
//! - JSON: `{"dim": d, "count": N, "vectors": [[x, y, ...], ...]}`
//! - CSV: one vector per row, `d` comma-separated columns, no header.
//!
//! Coordinates are written with 17 significant digits, so a write followed
//! by a read reproduces every coordinate bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::frame::VectorSystem;
use crate::{FrameError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` files are CSV, everything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// 17 significant digits: enough to round-trip any `f64`.
fn coord(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_system(vs: &VectorSystem, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            let _ = writeln!(out, "{{\n  \"dim\": {},\n  \"count\": {},\n  \"vectors\": [", vs.dim(), vs.count());
            for (i, v) in vs.vectors().enumerate() {
                let row: Vec<String> = v.iter().map(|&x| coord(x)).collect();
                let sep = if i + 1 == vs.count() { "" } else { "," };
                let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
            }
            out.push_str("  ]\n}\n");
        }
        Format::Csv => {
            for v in vs.vectors() {
                let row: Vec<String> = v.iter().map(|&x| coord(x)).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    dim: usize,
    count: usize,
    vectors: Vec<Vec<f64>>,
}

/// Parses a system. `dim`, when given, must match the data.
pub fn parse_system(text: &str, format: Format, dim: Option<usize>) -> Result<VectorSystem> {
    let (file_dim, rows) = match format {
        Format::Json => {
            let file: SystemFile = serde_json::from_str(text).map_err(|e| FrameError::Parse(e.to_string()))?;
            if file.vectors.len() != file.count {
                return Err(FrameError::Parse(format!(
                    "\"count\" is {} but {} vectors are listed",
                    file.count,
                    file.vectors.len()
                )));
            }
            if let Some((i, row)) = file.vectors.iter().enumerate().find(|(_, r)| r.len() != file.dim) {
                return Err(FrameError::Parse(format!(
                    "vector {} has {} coordinates, expected {}",
                    i + 1,
                    row.len(),
                    file.dim
                )));
            }
            (file.dim, file.vectors)
        }
        Format::Csv => parse_csv(text, dim)?,
    };
    if let Some(d) = dim {
        if d != file_dim {
            return Err(FrameError::Parse(format!("file has dimension {file_dim}, expected {d}")));
        }
    }
    if let Some((i, j)) = rows
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.iter().position(|x| !x.is_finite()).map(|j| (i, j)))
    {
        return Err(FrameError::Parse(format!("row {}: column {} is not finite", i + 1, j + 1)));
    }
    VectorSystem::new(file_dim, &rows).map_err(|e| FrameError::Parse(e.to_string()))
}

fn parse_csv(text: &str, dim: Option<usize>) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut expected = dim;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FrameError::Parse(format!("row {}: {e}", i + 1)))?;
        let want = *expected.get_or_insert(record.len());
        if record.len() != want {
            return Err(FrameError::Parse(format!(
                "row {}: expected {want} columns, found {}",
                i + 1,
                record.len()
            )));
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field
                    .parse::<f64>()
                    .map_err(|_| FrameError::Parse(format!("row {}: column {} is not a number: {field:?}", i + 1, j + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FrameError::Parse("no vectors in file".into()));
    }
    Ok((expected.unwrap_or(0), rows))
}

pub fn read_system(path: &Path, dim: Option<usize>) -> Result<VectorSystem> {
    let text = fs::read_to_string(path).map_err(|e| FrameError::Io(format!("{}: {e}", path.display())))?;
    parse_system(&text, Format::from_path(path), dim).map_err(|e| match e {
        FrameError::Parse(msg) => FrameError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_system(path: &Path, vs: &VectorSystem, format: Format) -> Result<()> {
    fs::write(path, format_system(vs, format)).map_err(|e| FrameError::Io(format!("{}: {e}", path.display())))
}

/// Envelope of every JSON report. `generated_at` is the last key, so it sits
/// on its own line of the pretty-printed output.
#[derive(Debug, Serialize)]
pub struct Report<'a, P: Serialize, T: Serialize> {
    pub command: &'a str,
    pub parameters: &'a P,
    pub result: T,
    pub generated_at: String,
}

pub fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

pub fn render_report<P: Serialize, T: Serialize>(command: &str, parameters: &P, result: T) -> Result<String> {
    let report = Report { command, parameters, result, generated_at: timestamp() };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| FrameError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}
