//! Compressed sparse row storage and the kernels built on it.

mod io;
pub(crate) mod ops;

pub use io::{read_matrix_market, write_matrix_market};
pub use ops::{dot, galerkin_product, galerkin_product_with, norm2};

use crate::error::{AmgError, Result};

/// Dense vector alias used throughout the crate.
pub type DenseVector = Vec<f64>;

/// Sorted-column CSR matrix.
///
/// Within every row column indices are strictly increasing; entries whose
/// value happens to be `0.0` stay in the pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 {
            return Err(AmgError::InvalidMatrix(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n_rows + 1
            )));
        }
        if row_offsets[0] != 0 || row_offsets[n_rows] != col_indices.len() {
            return Err(AmgError::InvalidMatrix("row_offsets must start at 0 and end at nnz".into()));
        }
        if col_indices.len() != values.len() {
            return Err(AmgError::InvalidMatrix("col_indices and values differ in length".into()));
        }
        for i in 0..n_rows {
            let (s, e) = (row_offsets[i], row_offsets[i + 1]);
            if s > e {
                return Err(AmgError::InvalidMatrix(format!("row_offsets decrease at row {i}")));
            }
            let cols = &col_indices[s..e];
            if cols.iter().any(|&c| c >= n_cols) {
                return Err(AmgError::InvalidMatrix(format!("column out of range in row {i}")));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(AmgError::InvalidMatrix(format!(
                    "columns in row {i} are not strictly increasing"
                )));
            }
        }
        Ok(Self { n_rows, n_cols, row_offsets, col_indices, values })
    }

    /// Builds from per-row `(col, value)` lists that are already sorted and
    /// free of duplicates.
    pub(crate) fn from_sorted_rows(n_rows: usize, n_cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        debug_assert_eq!(rows.len(), n_rows);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_offsets = Vec::with_capacity(n_rows + 1);
        let mut col_indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_offsets.push(0);
        for row in rows {
            for (c, v) in row {
                col_indices.push(c);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        Self { n_rows, n_cols, row_offsets, col_indices, values }
    }

    /// Coordinate-form builder. Duplicate `(row, col)` pairs are summed in
    /// input order.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; n_rows + 1];
        for &(r, c, _) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(AmgError::InvalidMatrix(format!(
                    "triplet ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
            counts[r + 1] += 1;
        }
        for i in 0..n_rows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut entries = vec![(0usize, 0.0f64); triplets.len()];
        for &(r, c, v) in triplets {
            entries[next[r]] = (c, v);
            next[r] += 1;
        }
        let rows = (0..n_rows)
            .map(|i| {
                let mut row = entries[counts[i]..counts[i + 1]].to_vec();
                merge_sorted_row(&mut row);
                row
            })
            .collect();
        Ok(Self::from_sorted_rows(n_rows, n_cols, rows))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Stores every entry of a dense row-major matrix whose value is nonzero.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let sparse_rows = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect())
            .collect();
        Self::from_sorted_rows(n_rows, n_cols, sparse_rows)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (i, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] += v;
            }
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[s..e], &self.values[s..e])
    }

    /// Range of stored-entry positions belonging to row `i`.
    #[inline]
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    /// Stored value at `(i, j)`, if present in the pattern.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    /// Same pattern, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.nnz() {
            return Err(AmgError::DimensionMismatch { expected: self.nnz(), actual: values.len() });
        }
        Ok(Self { values, ..self.clone() })
    }

    /// True when the pattern and values equal those of the transpose within
    /// `rel_tol` relative to the largest stored magnitude.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let t = self.transpose();
        if t.row_offsets != self.row_offsets || t.col_indices != self.col_indices {
            return false;
        }
        self.values.iter().zip(&t.values).all(|(a, b)| (a - b).abs() <= rel_tol * scale)
    }

    /// True when row `i` has no nonzero off-diagonal value.
    pub fn is_isolated_row(&self, i: usize) -> bool {
        let (cols, vals) = self.row(i);
        cols.iter().zip(vals).all(|(&c, &v)| c == i || v == 0.0)
    }
}

/// Sorts a row by column (stable) and sums duplicate columns in input order.
pub(crate) fn merge_sorted_row(row: &mut Vec<(usize, f64)>) {
    row.sort_by_key(|e| e.0);
    let mut w = 0;
    for k in 0..row.len() {
        if w > 0 && row[w - 1].0 == row[k].0 {
            row[w - 1].1 += row[k].1;
        } else {
            row[w] = row[k];
            w += 1;
        }
    }
    row.truncate(w);
}
