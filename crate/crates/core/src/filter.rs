//! Dropping criteria and the filtered operator used for prolongator
//! smoothing.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{AmgError, Result};
use crate::exec::Execution;
use crate::soc::SocMatrix;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropKind {
    Pointwise,
    CutDrop,
}

impl DropKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DropKind::Pointwise => "pointwise",
            DropKind::CutDrop => "cutdrop",
        }
    }
}

impl fmt::Display for DropKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DropKind {
    type Err = AmgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pointwise" | "pw" => Ok(DropKind::Pointwise),
            "cutdrop" | "cut-drop" | "cut_drop" => Ok(DropKind::CutDrop),
            other => Err(AmgError::InvalidConfig(format!("unknown dropping criterion `{other}`"))),
        }
    }
}

/// Keep/drop decision for every stored entry of a strength matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DropMask {
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    keep: Vec<bool>,
    pub theta: f64,
    pub kind: DropKind,
}

impl DropMask {
    pub fn keep(&self) -> &[bool] {
        &self.keep
    }

    pub fn n_rows(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Whether `m` has exactly the pattern this mask was built on.
    pub fn matches(&self, m: &CsrMatrix) -> bool {
        m.row_offsets() == self.row_offsets.as_slice() && m.col_indices() == self.col_indices.as_slice()
    }

    /// Kept off-diagonal entries `(row, col)` in row-major order.
    pub fn kept_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_rows()).flat_map(move |i| {
            (self.row_offsets[i]..self.row_offsets[i + 1])
                .filter(move |&k| self.keep[k] && self.col_indices[k] != i)
                .map(move |k| (i, self.col_indices[k]))
        })
    }

    pub fn n_kept_edges(&self) -> usize {
        self.kept_edges().count()
    }

    /// Keeps an off-diagonal entry only if its transpose is kept as well.
    pub fn symmetrized(&self) -> DropMask {
        let mut keep = self.keep.clone();
        for i in 0..self.n_rows() {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.col_indices[k];
                if j == i || !keep[k] {
                    continue;
                }
                let (s, e) = (self.row_offsets[j], self.row_offsets[j + 1]);
                let mirrored = self.col_indices[s..e]
                    .binary_search(&i)
                    .map(|p| self.keep[s + p])
                    .unwrap_or(false);
                if !mirrored {
                    keep[k] = false;
                }
            }
        }
        DropMask { keep, ..self.clone() }
    }

    /// Edge list `level,row,col` of kept off-diagonal entries.
    pub fn write_edges_csv<W: Write>(&self, level: usize, mut w: W) -> Result<()> {
        writeln!(w, "level,row,col")?;
        for (i, j) in self.kept_edges() {
            writeln!(w, "{level},{i},{j}")?;
        }
        Ok(())
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(AmgError::ThetaOutOfRange(theta))
    }
}

pub fn apply_drop(kind: DropKind, s: &SocMatrix, theta: f64) -> Result<DropMask> {
    apply_drop_with(Execution::default(), kind, s, theta)
}

pub fn apply_drop_with(exec: Execution, kind: DropKind, s: &SocMatrix, theta: f64) -> Result<DropMask> {
    match kind {
        DropKind::Pointwise => drop_pointwise_with(exec, s, theta),
        DropKind::CutDrop => drop_cutdrop_with(exec, s, theta),
    }
}

fn build_mask<F>(exec: Execution, s: &SocMatrix, theta: f64, kind: DropKind, row_rule: F) -> DropMask
where
    F: Fn(usize, &[usize], &[f64]) -> Vec<bool> + Sync + Send,
{
    let m = &s.matrix;
    let keep = exec
        .map(m.n_rows(), |i| {
            let (cols, vals) = m.row(i);
            row_rule(i, cols, vals)
        })
        .concat();
    DropMask {
        row_offsets: m.row_offsets().to_vec(),
        col_indices: m.col_indices().to_vec(),
        keep,
        theta,
        kind,
    }
}

/// Keeps off-diagonal `(i, j)` iff `|S_ij| >= theta`.
pub fn drop_pointwise(s: &SocMatrix, theta: f64) -> Result<DropMask> {
    drop_pointwise_with(Execution::default(), s, theta)
}

pub fn drop_pointwise_with(exec: Execution, s: &SocMatrix, theta: f64) -> Result<DropMask> {
    check_theta(theta)?;
    Ok(build_mask(exec, s, theta, DropKind::Pointwise, |i, cols, vals| {
        cols.iter().zip(vals).map(|(&j, &v)| j == i || v.abs() >= theta).collect()
    }))
}

/// Row-wise gap detection: with the off-diagonal magnitudes of a row sorted
/// descending, find the first `k` with `theta * s_k >= s_{k+1}` and keep
/// every entry `>= s_k`. Rows without such a gap are kept whole, and
/// `theta = 0` keeps everything.
pub fn drop_cutdrop(s: &SocMatrix, theta: f64) -> Result<DropMask> {
    drop_cutdrop_with(Execution::default(), s, theta)
}

pub fn drop_cutdrop_with(exec: Execution, s: &SocMatrix, theta: f64) -> Result<DropMask> {
    check_theta(theta)?;
    Ok(build_mask(exec, s, theta, DropKind::CutDrop, |i, cols, vals| cutdrop_row(i, cols, vals, theta)))
}

fn cutdrop_row(i: usize, cols: &[usize], vals: &[f64], theta: f64) -> Vec<bool> {
    let mut keep = vec![true; cols.len()];
    if theta == 0.0 {
        return keep;
    }
    let mut order: Vec<usize> = (0..cols.len()).filter(|&k| cols[k] != i).collect();
    // descending magnitude, ties by ascending column
    order.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()).then(cols[a].cmp(&cols[b])));
    let cut = order
        .windows(2)
        .find(|w| theta * vals[w[0]].abs() >= vals[w[1]].abs())
        .map(|w| vals[w[0]].abs());
    if let Some(threshold) = cut {
        for &k in &order {
            keep[k] = vals[k].abs() >= threshold;
        }
    }
    keep
}

/// Filtered operator: kept off-diagonals are copied, dropped ones are
/// lumped onto the diagonal so row sums are preserved. Dropped entries
/// leave the pattern.
pub fn filter_matrix(a: &CsrMatrix, mask: &DropMask) -> Result<CsrMatrix> {
    filter_matrix_with(Execution::default(), a, mask)
}

pub fn filter_matrix_with(exec: Execution, a: &CsrMatrix, mask: &DropMask) -> Result<CsrMatrix> {
    if !mask.matches(a) {
        return Err(AmgError::PatternMismatch);
    }
    let rows = exec.map(a.n_rows(), |i| {
        let range = a.row_range(i);
        let (cols, vals) = a.row(i);
        let keep = &mask.keep[range];
        let mut diag = 0.0;
        let mut lumped = 0.0;
        let mut row = Vec::with_capacity(cols.len());
        let mut diag_pos = None;
        for ((&j, &v), &k) in cols.iter().zip(vals).zip(keep) {
            if j == i {
                diag = v;
                diag_pos = Some(row.len());
                row.push((j, 0.0));
            } else if k {
                row.push((j, v));
            } else {
                lumped += v;
            }
        }
        let d = diag + lumped;
        match diag_pos {
            Some(p) => row[p].1 = d,
            None => {
                let p = row.partition_point(|e| e.0 < i);
                row.insert(p, (i, d));
            }
        }
        row
    });
    Ok(CsrMatrix::from_sorted_rows(a.n_rows(), a.n_cols(), rows))
}

/// Absolute row sums of the filtered operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OneNormDiagonal {
    pub values: Vec<f64>,
    /// Rows that were entirely zero; their entry was replaced by 1.
    pub zero_rows: Vec<usize>,
}

pub fn one_norm_diagonal(a_f: &CsrMatrix) -> Result<OneNormDiagonal> {
    if !a_f.is_square() {
        return Err(AmgError::DimensionMismatch { expected: a_f.n_rows(), actual: a_f.n_cols() });
    }
    let mut zero_rows = Vec::new();
    let values = (0..a_f.n_rows())
        .map(|i| {
            let s: f64 = a_f.row(i).1.iter().map(|v| v.abs()).sum();
            if s == 0.0 {
                zero_rows.push(i);
                1.0
            } else {
                s
            }
        })
        .collect();
    Ok(OneNormDiagonal { values, zero_rows })
}
