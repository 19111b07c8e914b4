//! alist text format for sparse parity-check matrices.
//!
//! Line 1 is `n m`, line 2 the maximal column and row degrees, then the column
//! degrees, the row degrees, `n` lines of 1-indexed row lists and `m` lines of
//! 1-indexed column lists. Lists are zero-padded to the maximal degree.

use std::fmt::Write as _;

use crate::error::CodeError;
use crate::gf2::BitMatrix;

fn join_padded(items: &[usize], width: usize) -> String {
    let mut line = String::new();
    for i in 0..width {
        if i > 0 {
            line.push(' ');
        }
        let v = items.get(i).map_or(0, |&x| x + 1);
        write!(line, "{v}").unwrap();
    }
    line
}

pub fn to_alist(h: &BitMatrix) -> String {
    let (m, n) = (h.nrows(), h.ncols());
    let cols = h.transpose().supports();
    let rows = h.supports();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{n} {m}\n{max_col} {max_row}\n");
    // an all-zero list is written as a single 0 so that no line is empty
    let (col_width, row_width) = (max_col.max(1), max_row.max(1));
    let degrees = |lists: &[Vec<usize>]| {
        lists
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&degrees(&cols));
    out.push('\n');
    out.push_str(&degrees(&rows));
    out.push('\n');
    for c in &cols {
        out.push_str(&join_padded(c, col_width));
        out.push('\n');
    }
    for r in &rows {
        out.push_str(&join_padded(r, row_width));
        out.push('\n');
    }
    out
}

/// Parses an alist file. Zero padding is ignored; the row lists must agree
/// with the column lists.
pub fn from_alist(text: &str) -> Result<BitMatrix, CodeError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut numbers = |what: &str| -> Result<Vec<usize>, CodeError> {
        let line = lines
            .next()
            .ok_or_else(|| CodeError::Parse(format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| CodeError::Parse(format!("{what}: {e}")))
            })
            .collect()
    };
    let header = numbers("header")?;
    let [n, m] = header[..] else {
        return Err(CodeError::Parse("header must be `n m`".into()));
    };
    numbers("maximal degrees")?;
    let col_deg = if n > 0 { numbers("column degrees")? } else { Vec::new() };
    let row_deg = if m > 0 { numbers("row degrees")? } else { Vec::new() };
    if col_deg.len() != n || row_deg.len() != m {
        return Err(CodeError::Parse("degree list length mismatch".into()));
    }
    let mut entries = Vec::new();
    for (c, &deg) in col_deg.iter().enumerate() {
        let list: Vec<usize> = numbers("column list")?.into_iter().filter(|&x| x > 0).collect();
        if list.len() != deg {
            return Err(CodeError::Parse(format!("column {} degree mismatch", c + 1)));
        }
        for r in list {
            if r > m {
                return Err(CodeError::Parse(format!("row index {r} > {m}")));
            }
            entries.push((r - 1, c));
        }
    }
    let h = BitMatrix::from_entries(m, n, &entries)?;
    for (r, &deg) in row_deg.iter().enumerate() {
        let mut list: Vec<usize> = numbers("row list")?
            .into_iter()
            .filter(|&x| x > 0)
            .map(|x| x - 1)
            .collect();
        list.sort_unstable();
        if list.len() != deg || list != h.row(r).support() {
            return Err(CodeError::Parse(format!(
                "row {} disagrees with the column lists",
                r + 1
            )));
        }
    }
    Ok(h)
}

/// Serde adapter that stores a [`BitMatrix`] as an alist string.
pub mod serde_alist {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::gf2::BitMatrix;

    pub fn serialize<S: Serializer>(h: &BitMatrix, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_alist(h))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BitMatrix, D::Error> {
        let text = String::deserialize(d)?;
        super::from_alist(&text).map_err(serde::de::Error::custom)
    }
}
