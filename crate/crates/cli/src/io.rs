//! Matrix files: JSON `{"rows", "cols", "data"}` (row-major) or CSV with one
//! matrix row per line.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spcert_core::{DenseMatrix, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl MatrixFormat {
    /// `.csv` means CSV, anything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Json,
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Parse {
                location: "format".into(),
                message: format!("unknown matrix format {other:?} (expected csv or json)"),
            }),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<DenseMatrix> {
    match format {
        MatrixFormat::Json => parse_json(text),
        MatrixFormat::Csv => parse_csv(text),
    }
}

fn parse_json(text: &str) -> Result<DenseMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if file.data.len() != file.rows * file.cols {
        return Err(Error::DimensionMismatch(format!(
            "{} data values for a {}x{} matrix",
            file.data.len(),
            file.rows,
            file.cols
        )));
    }
    DenseMatrix::new(file.rows, file.cols, file.data)
}

fn parse_csv(text: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (field_no, field) in line.split(',').enumerate() {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                location: format!("line {} field {}", lineno + 1, field_no + 1),
                message: format!("not a number: {field:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    location: format!("line {} field {}", lineno + 1, field_no + 1),
                    message: format!("non-finite value {field:?}"),
                });
            }
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    location: format!("line {}", lineno + 1),
                    message: format!("{} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            location: "line 1".into(),
            message: "empty matrix".into(),
        });
    }
    DenseMatrix::from_rows(&rows)
}

pub fn load_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<DenseMatrix> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(
        &text,
        format.unwrap_or_else(|| MatrixFormat::from_path(path)),
    )
}

/// Serializes with shortest round-trip decimals, so reloading is bit-exact.
pub fn matrix_to_string(a: &DenseMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Json => {
            let file = MatrixFile {
                rows: a.rows(),
                cols: a.cols(),
                data: a.data().to_vec(),
            };
            let mut s = serde_json::to_string(&file).expect("finite matrix serializes");
            s.push('\n');
            s
        }
        MatrixFormat::Csv => {
            let mut s = String::new();
            for i in 0..a.rows() {
                let fields: Vec<String> = a
                    .row(i)
                    .iter()
                    .map(|v| serde_json::to_string(v).expect("finite value"))
                    .collect();
                s.push_str(&fields.join(","));
                s.push('\n');
            }
            s
        }
    }
}

pub fn save_matrix(a: &DenseMatrix, path: &Path, format: MatrixFormat) -> Result<()> {
    fs::write(path, matrix_to_string(a, format))?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn report_to_string<T: Serialize>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn save_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    fs::write(path, report_to_string(report)?)?;
    Ok(())
}
