//! Strength-of-connection measures.
//!
//! Every measure returns a matrix sharing the operator's sparsity pattern,
//! with nonnegative off-diagonal strengths and a unit diagonal.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{AmgError, Result};
use crate::exec::Execution;
use crate::fem::MaterialTensor;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SocKind {
    /// `|A_ij| / sqrt(|A_ii| |A_jj|)`
    Sa,
    /// Euclidean distance Laplacian
    Dlap,
    /// Distance Laplacian under the material-weighted metric
    MaterialDlap,
}

impl SocKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SocKind::Sa => "sa",
            SocKind::Dlap => "dlap",
            SocKind::MaterialDlap => "material",
        }
    }
}

impl fmt::Display for SocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SocKind {
    type Err = AmgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sa" => Ok(SocKind::Sa),
            "dlap" => Ok(SocKind::Dlap),
            "material" | "material_dlap" | "material-dlap" => Ok(SocKind::MaterialDlap),
            other => Err(AmgError::InvalidConfig(format!("unknown strength measure `{other}`"))),
        }
    }
}

/// Per-row coordinates and material tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryData {
    pub coords: Vec<[f64; 3]>,
    pub materials: Vec<MaterialTensor>,
}

impl AuxiliaryData {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.coords.len() != n {
            return Err(AmgError::DimensionMismatch { expected: n, actual: self.coords.len() });
        }
        if self.materials.len() != n {
            return Err(AmgError::DimensionMismatch { expected: n, actual: self.materials.len() });
        }
        Ok(())
    }
}

/// Strength values on the source operator's pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct SocMatrix {
    pub matrix: CsrMatrix,
    pub kind: SocKind,
}

impl SocMatrix {
    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "row,col,value")?;
        for i in 0..self.matrix.n_rows() {
            let (cols, vals) = self.matrix.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                writeln!(w, "{i},{j},{v:e}")?;
            }
        }
        Ok(())
    }
}

/// Dispatches on `kind`; `aux` is ignored by [`SocKind::Sa`].
pub fn compute_soc(kind: SocKind, a: &CsrMatrix, aux: &AuxiliaryData) -> Result<SocMatrix> {
    compute_soc_with(Execution::default(), kind, a, aux)
}

pub fn compute_soc_with(exec: Execution, kind: SocKind, a: &CsrMatrix, aux: &AuxiliaryData) -> Result<SocMatrix> {
    match kind {
        SocKind::Sa => soc_sa_with(exec, a),
        SocKind::Dlap => soc_dlap_with(exec, a, aux),
        SocKind::MaterialDlap => soc_material_dlap_with(exec, a, aux),
    }
}

pub fn soc_sa(a: &CsrMatrix) -> Result<SocMatrix> {
    soc_sa_with(Execution::default(), a)
}

pub fn soc_sa_with(exec: Execution, a: &CsrMatrix) -> Result<SocMatrix> {
    if !a.is_square() {
        return Err(AmgError::DimensionMismatch { expected: a.n_rows(), actual: a.n_cols() });
    }
    let diag: Vec<f64> = a.extract_diagonal().iter().map(|d| d.abs()).collect();
    if let Some(row) = diag.iter().position(|&d| d == 0.0) {
        return Err(AmgError::ZeroDiagonal { row });
    }
    Ok(SocMatrix { matrix: normalize(exec, a, &diag), kind: SocKind::Sa })
}

/// `|M_ij| / sqrt(d_i d_j)` off the diagonal, 1 on it.
fn normalize(exec: Execution, m: &CsrMatrix, diag: &[f64]) -> CsrMatrix {
    let rows = exec.map(m.n_rows(), |i| {
        let (cols, vals) = m.row(i);
        cols.iter()
            .zip(vals)
            .map(|(&j, &v)| if i == j { (j, 1.0) } else { (j, v.abs() / (diag[i] * diag[j]).sqrt()) })
            .collect::<Vec<_>>()
    });
    CsrMatrix::from_sorted_rows(m.n_rows(), m.n_cols(), rows)
}

/// Distance Laplacian on the pattern of `pattern`: `-1/d(i,j)^2` for every
/// stored nonzero off-diagonal, and the negated off-diagonal sum on the
/// diagonal. Rows without a stored diagonal get one.
pub fn distance_laplacian<F>(pattern: &CsrMatrix, metric: F) -> Result<CsrMatrix>
where
    F: Fn(usize, usize) -> f64 + Sync + Send,
{
    distance_laplacian_with(Execution::default(), pattern, metric)
}

pub fn distance_laplacian_with<F>(exec: Execution, pattern: &CsrMatrix, metric: F) -> Result<CsrMatrix>
where
    F: Fn(usize, usize) -> f64 + Sync + Send,
{
    if !pattern.is_square() {
        return Err(AmgError::DimensionMismatch { expected: pattern.n_rows(), actual: pattern.n_cols() });
    }
    let rows = exec.map(pattern.n_rows(), |i| -> Result<Vec<(usize, f64)>> {
        let (cols, vals) = pattern.row(i);
        let mut row = Vec::with_capacity(cols.len() + 1);
        let mut off_sum = 0.0;
        let mut diag_pos = None;
        for (&j, &v) in cols.iter().zip(vals) {
            if j == i {
                diag_pos = Some(row.len());
                row.push((j, 0.0));
                continue;
            }
            let w = if v != 0.0 {
                let d = metric(i, j);
                if !(d > 0.0) {
                    return Err(AmgError::ZeroDistance { row: i, col: j });
                }
                -1.0 / (d * d)
            } else {
                0.0
            };
            off_sum += w;
            row.push((j, w));
        }
        match diag_pos {
            Some(k) => row[k].1 = -off_sum,
            None => {
                let k = row.partition_point(|e| e.0 < i);
                row.insert(k, (i, -off_sum));
            }
        }
        Ok(row)
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CsrMatrix::from_sorted_rows(pattern.n_rows(), pattern.n_cols(), rows))
}

fn euclidean(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

fn soc_from_laplacian(exec: Execution, l: &CsrMatrix, kind: SocKind) -> SocMatrix {
    let diag: Vec<f64> = l.extract_diagonal().iter().map(|d| d.abs()).collect();
    SocMatrix { matrix: normalize(exec, l, &diag), kind }
}

pub fn soc_dlap(a: &CsrMatrix, aux: &AuxiliaryData) -> Result<SocMatrix> {
    soc_dlap_with(Execution::default(), a, aux)
}

pub fn soc_dlap_with(exec: Execution, a: &CsrMatrix, aux: &AuxiliaryData) -> Result<SocMatrix> {
    aux.check(a.n_rows())?;
    let l = distance_laplacian_with(exec, a, |i, j| euclidean(&aux.coords[i], &aux.coords[j]))?;
    Ok(soc_from_laplacian(exec, &l, SocKind::Dlap))
}

/// `max(sqrt(D^T s_i^-1 D), sqrt(D^T s_j^-1 D))` with `D = x_i - x_j`.
pub fn material_distance(xi: &[f64; 3], xj: &[f64; 3], sigma_i: &MaterialTensor, sigma_j: &MaterialTensor) -> Result<f64> {
    Ok(material_distance_inv(xi, xj, &sigma_i.inverse()?, &sigma_j.inverse()?))
}

fn material_distance_inv(xi: &[f64; 3], xj: &[f64; 3], inv_i: &MaterialTensor, inv_j: &MaterialTensor) -> f64 {
    let delta = [xi[0] - xj[0], xi[1] - xj[1], xi[2] - xj[2]];
    inv_i.quadratic_form(&delta).max(inv_j.quadratic_form(&delta)).sqrt()
}

pub fn soc_material_dlap(a: &CsrMatrix, aux: &AuxiliaryData) -> Result<SocMatrix> {
    soc_material_dlap_with(Execution::default(), a, aux)
}

pub fn soc_material_dlap_with(exec: Execution, a: &CsrMatrix, aux: &AuxiliaryData) -> Result<SocMatrix> {
    aux.check(a.n_rows())?;
    let inverses = exec
        .map_slice(&aux.materials, MaterialTensor::inverse)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let l = distance_laplacian_with(exec, a, |i, j| {
        material_distance_inv(&aux.coords[i], &aux.coords[j], &inverses[i], &inverses[j])
    })?;
    Ok(soc_from_laplacian(exec, &l, SocKind::MaterialDlap))
}
