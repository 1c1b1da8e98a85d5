//! Dense exact-integer matrices with row and column labels.
//!
//! Labels name simplices (e.g. `"0-1-2"`) or critical cells from external
//! fixtures (e.g. `"eta_8"`, `"sigma_3"`). The JSON form is
//! `{"rows": [...], "cols": [...], "entries": [[...], ...]}` with row-major
//! arrays of (arbitrary-precision) integers.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("unknown {axis} label `{label}`")]
    UnknownLabel { axis: &'static str, label: String },
    #[error("duplicate {axis} label `{label}`")]
    DuplicateLabel { axis: &'static str, label: String },
    #[error("entry grid is {got_rows}x{got_cols}, labels demand {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("cannot multiply: left has {left_cols} columns, right has {right_rows} rows")]
    IncompatibleProduct { left_cols: usize, right_rows: usize },
    #[error("entry at ({row}, {col}) is not an integer: `{token}`")]
    NonIntegerEntry {
        row: usize,
        col: usize,
        token: String,
    },
}

/// A dense matrix over the integers whose axes carry unique labels.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct IntegerMatrix {
    rows: Vec<String>,
    cols: Vec<String>,
    /// Row-major, `rows.len() * cols.len()` entries.
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    /// Zero matrix with the given labels.
    pub fn zeros(rows: Vec<String>, cols: Vec<String>) -> Result<Self, MatrixError> {
        let n = rows.len() * cols.len();
        Self::from_parts(rows, cols, vec![BigInt::zero(); n])
    }

    pub fn from_parts(
        rows: Vec<String>,
        cols: Vec<String>,
        entries: Vec<BigInt>,
    ) -> Result<Self, MatrixError> {
        check_unique("row", &rows)?;
        check_unique("column", &cols)?;
        if entries.len() != rows.len() * cols.len() {
            return Err(MatrixError::ShapeMismatch {
                rows: rows.len(),
                cols: cols.len(),
                got_rows: if cols.is_empty() { 0 } else { entries.len() / cols.len() },
                got_cols: cols.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Convenience constructor from machine integers, mostly for tests and fixtures.
    pub fn from_i64_rows(
        rows: Vec<String>,
        cols: Vec<String>,
        grid: &[Vec<i64>],
    ) -> Result<Self, MatrixError> {
        if grid.len() != rows.len() || grid.iter().any(|r| r.len() != cols.len()) {
            return Err(MatrixError::ShapeMismatch {
                rows: rows.len(),
                cols: cols.len(),
                got_rows: grid.len(),
                got_cols: grid.first().map_or(0, |r| r.len()),
            });
        }
        let entries = grid
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        Self::from_parts(rows, cols, entries)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[String] {
        &self.cols
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.cols.iter().position(|l| l == label)
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.cols.len() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.cols.len() + col] = value;
    }

    pub fn entry_by_labels(&self, row: &str, col: &str) -> Result<&BigInt, MatrixError> {
        let r = self.row_index(row).ok_or_else(|| MatrixError::UnknownLabel {
            axis: "row",
            label: row.to_string(),
        })?;
        let c = self.col_index(col).ok_or_else(|| MatrixError::UnknownLabel {
            axis: "column",
            label: col.to_string(),
        })?;
        Ok(self.get(r, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols.len() {
            for r in 0..self.rows.len() {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries,
        }
    }

    /// Matrix product `self * rhs`. Column labels of `self` must match the
    /// row labels of `rhs` (same cells, same canonical order).
    pub fn mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::IncompatibleProduct {
                left_cols: self.cols.len(),
                right_rows: rhs.rows.len(),
            });
        }
        let mut out = Self::zeros(self.rows.clone(), rhs.cols.clone())?;
        for i in 0..self.rows.len() {
            for k in 0..self.cols.len() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols.len() {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn delete_row(&self, label: &str) -> Result<Self, MatrixError> {
        let r = self.row_index(label).ok_or_else(|| MatrixError::UnknownLabel {
            axis: "row",
            label: label.to_string(),
        })?;
        let rows: Vec<String> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, l)| l.clone())
            .collect();
        let mut entries = Vec::with_capacity(rows.len() * self.cols.len());
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            for j in 0..self.cols.len() {
                entries.push(self.get(i, j).clone());
            }
        }
        Self::from_parts(rows, self.cols.clone(), entries)
    }

    pub fn delete_col(&self, label: &str) -> Result<Self, MatrixError> {
        let c = self.col_index(label).ok_or_else(|| MatrixError::UnknownLabel {
            axis: "column",
            label: label.to_string(),
        })?;
        let cols: Vec<String> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != c)
            .map(|(_, l)| l.clone())
            .collect();
        let mut entries = Vec::with_capacity(self.rows.len() * cols.len());
        for i in 0..self.rows.len() {
            for j in 0..self.cols.len() {
                if j != c {
                    entries.push(self.get(i, j).clone());
                }
            }
        }
        Self::from_parts(self.rows.clone(), cols, entries)
    }

    /// Scale one row in place by `factor`.
    pub fn scale_row(&mut self, row: usize, factor: &BigInt) {
        let w = self.cols.len();
        for j in 0..w {
            let v = self.get(row, j) * factor;
            self.set(row, j, v);
        }
    }

    /// Add `factor * row(source)` to `row(target)` in place.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        let w = self.cols.len();
        for j in 0..w {
            let v = self.get(target, j) + factor * self.get(source, j);
            self.set(target, j, v);
        }
    }

    /// True when every entry is `0`, `1` or `-1`.
    pub fn entries_are_signs(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.is_zero() || e.abs().is_one())
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows.len(), self.cols.len())?;
        write!(f, "{self}")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows.len())
            .map(|i| (0..self.cols.len()).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        let mut widths: Vec<usize> = self.cols.iter().map(|c| c.len()).collect();
        for row in &cells {
            for (j, cell) in row.iter().enumerate() {
                widths[j] = widths[j].max(cell.len());
            }
        }
        let label_w = self.rows.iter().map(|r| r.len()).max().unwrap_or(0);
        write!(f, "{:label_w$}", "")?;
        for (j, c) in self.cols.iter().enumerate() {
            write!(f, " {:>w$}", c, w = widths[j])?;
        }
        writeln!(f)?;
        for (i, r) in self.rows.iter().enumerate() {
            write!(f, "{r:label_w$}")?;
            for (j, cell) in cells[i].iter().enumerate() {
                write!(f, " {:>w$}", cell, w = widths[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check_unique(axis: &'static str, labels: &[String]) -> Result<(), MatrixError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(MatrixError::DuplicateLabel {
                axis,
                label: l.clone(),
            });
        }
    }
    Ok(())
}

/// Wire form of [`IntegerMatrix`]. Entries round-trip through
/// arbitrary-precision JSON numbers, so nothing is clamped to 64 bits.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<Vec<serde_json::Number>>,
}

impl From<IntegerMatrix> for MatrixFile {
    fn from(m: IntegerMatrix) -> Self {
        let entries = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| {
                        serde_json::Number::from_str(&m.get(i, j).to_string())
                            .expect("integer literal is a valid JSON number")
                    })
                    .collect()
            })
            .collect();
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}

impl TryFrom<MatrixFile> for IntegerMatrix {
    type Error = MatrixError;

    fn try_from(f: MatrixFile) -> Result<Self, MatrixError> {
        if f.entries.len() != f.rows.len()
            || f.entries.iter().any(|r| r.len() != f.cols.len())
        {
            return Err(MatrixError::ShapeMismatch {
                rows: f.rows.len(),
                cols: f.cols.len(),
                got_rows: f.entries.len(),
                got_cols: f.entries.first().map_or(0, |r| r.len()),
            });
        }
        let mut entries = Vec::with_capacity(f.rows.len() * f.cols.len());
        for (i, row) in f.entries.iter().enumerate() {
            for (j, n) in row.iter().enumerate() {
                let token = n.to_string();
                let v = BigInt::from_str(&token).map_err(|_| MatrixError::NonIntegerEntry {
                    row: i,
                    col: j,
                    token,
                })?;
                entries.push(v);
            }
        }
        Self::from_parts(f.rows, f.cols, entries)
    }
}
