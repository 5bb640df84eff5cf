//! Plain-text matrix format: a `rows cols` header line followed by one line
//! per row of whitespace-separated decimals with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let line: Vec<String> = a.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing matrix header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header token {t:?}")))
        })
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!(
            "header must be `rows cols`, got {header:?}"
        )));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        if i >= rows {
            return Err(Error::Parse(format!("more than {rows} data rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            data.push(
                tok.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad entry {tok:?} on row {i}")))?,
            );
        }
        if data.len() - before != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                data.len() - before
            )));
        }
    }
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {rows} data rows, got {}",
            data.len() / cols.max(1)
        )));
    }
    DenseMatrix::new(rows, cols, data)
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(a)).map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text)
}
