//! Text formats for parity-check matrices: MacKay's "alist" sparse format and
//! a dense 0/1 grid.

use std::fmt::Write as _;
use std::path::Path;

use super::matrix::BinaryMatrix;
use crate::error::{Error, Result};

/// Serializes `m` in alist format. Column lists are padded with zeros to the
/// maximum column weight and row lists to the maximum row weight; indices are 1-based.
pub fn to_alist(m: &BinaryMatrix) -> String {
    let (rows, cols) = m.shape();
    let col_lists: Vec<Vec<usize>> = (0..cols)
        .map(|c| (0..rows).filter(|&r| m.get(r, c)).collect())
        .collect();
    let row_lists: Vec<Vec<usize>> = (0..rows).map(|r| m.row_support(r)).collect();
    let max_col = col_lists.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_lists.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{cols} {rows}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let join = |v: Vec<String>| v.join(" ");
    let _ = writeln!(out, "{}", join(col_lists.iter().map(|l| l.len().to_string()).collect()));
    let _ = writeln!(out, "{}", join(row_lists.iter().map(|l| l.len().to_string()).collect()));
    for (lists, width) in [(&col_lists, max_col), (&row_lists, max_row)] {
        for l in lists {
            let mut items: Vec<String> = l.iter().map(|i| (i + 1).to_string()).collect();
            items.resize(width, "0".to_string());
            let _ = writeln!(out, "{}", join(items));
        }
    }
    out
}

/// Parses an alist file. Both the column and row lists are read and must agree.
pub fn from_alist(text: &str) -> Result<BinaryMatrix> {
    let mut tokens = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|e| Error::Parse(format!("alist: bad integer {t:?}: {e}")))
    });
    let mut next = |what: &str| -> Result<usize> {
        tokens
            .next()
            .unwrap_or_else(|| Err(Error::Parse(format!("alist: truncated while reading {what}"))))
    };
    let cols = next("column count")?;
    let rows = next("row count")?;
    let max_col = next("max column weight")?;
    let max_row = next("max row weight")?;
    let col_w: Vec<usize> = (0..cols).map(|_| next("column weights")).collect::<Result<_>>()?;
    let row_w: Vec<usize> = (0..rows).map(|_| next("row weights")).collect::<Result<_>>()?;

    let mut by_cols = BinaryMatrix::zeros(rows, cols);
    for (c, &w) in col_w.iter().enumerate() {
        let mut seen = 0;
        for _ in 0..max_col {
            let r = next("column lists")?;
            if r == 0 {
                continue;
            }
            if r > rows {
                return Err(Error::Parse(format!("alist: row index {r} exceeds {rows}")));
            }
            by_cols.set(r - 1, c, true);
            seen += 1;
        }
        if seen != w {
            return Err(Error::Parse(format!(
                "alist: column {} lists {seen} entries, header says {w}",
                c + 1
            )));
        }
    }
    let mut by_rows = BinaryMatrix::zeros(rows, cols);
    for (r, &w) in row_w.iter().enumerate() {
        let mut seen = 0;
        for _ in 0..max_row {
            let c = next("row lists")?;
            if c == 0 {
                continue;
            }
            if c > cols {
                return Err(Error::Parse(format!("alist: column index {c} exceeds {cols}")));
            }
            by_rows.set(r, c - 1, true);
            seen += 1;
        }
        if seen != w {
            return Err(Error::Parse(format!(
                "alist: row {} lists {seen} entries, header says {w}",
                r + 1
            )));
        }
    }
    if by_rows != by_cols {
        return Err(Error::Parse("alist: row and column lists disagree".into()));
    }
    Ok(by_rows)
}

pub fn read_alist(path: impl AsRef<Path>) -> Result<BinaryMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_alist(&text)
}

pub fn write_alist(path: impl AsRef<Path>, m: &BinaryMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_alist(m)).map_err(|e| Error::io(path, e))
}

pub fn read_dense(path: impl AsRef<Path>) -> Result<BinaryMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    BinaryMatrix::parse_dense(&text)
}

pub fn write_dense(path: impl AsRef<Path>, m: &BinaryMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, m.to_dense_string()).map_err(|e| Error::io(path, e))
}
