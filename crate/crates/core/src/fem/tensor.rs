use serde::Serialize;

use crate::error::{AmgError, Result};

/// Symmetric positive definite conductivity tensor in 2 or 3 dimensions.
///
/// Entries outside the leading `dim x dim` block are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialTensor {
    dim: usize,
    m: [[f64; 3]; 3],
}

impl MaterialTensor {
    pub fn isotropic(dim: usize, value: f64) -> Self {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate().take(dim) {
            row[i] = value;
        }
        Self { dim, m }
    }

    pub fn identity(dim: usize) -> Self {
        Self::isotropic(dim, 1.0)
    }

    /// Diagonal tensor; the dimension is `diag.len()`.
    pub fn diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        let mut m = [[0.0; 3]; 3];
        for (i, &d) in diag.iter().enumerate() {
            m[i][i] = d;
        }
        Self { dim, m }
    }

    /// Tensor from a full matrix whose leading block must be exactly
    /// symmetric.
    pub fn from_matrix(dim: usize, m: [[f64; 3]; 3]) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(AmgError::NotSpd(format!("unsupported dimension {dim}")));
        }
        let mut out = [[0.0; 3]; 3];
        for i in 0..dim {
            for j in 0..dim {
                if m[i][j] != m[j][i] {
                    return Err(AmgError::NotSpd(format!("entry ({i},{j}) differs from ({j},{i})")));
                }
                out[i][j] = m[i][j];
            }
        }
        Ok(Self { dim, m: out })
    }

    /// `Q^T diag(d) Q` assembled as a sum of rank-one terms, which is
    /// symmetric to the last bit.
    pub fn rotated(dim: usize, q: [[f64; 3]; 3], d: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..dim {
            for j in i..dim {
                let mut s = 0.0;
                for k in 0..dim {
                    s += q[k][i] * d[k] * q[k][j];
                }
                m[i][j] = s;
                m[j][i] = s;
            }
        }
        Self { dim, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn as_matrix(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|v| *v *= alpha);
        Self { dim: self.dim, m }
    }

    /// Arithmetic mean. All inputs must share one dimension.
    pub fn mean<'a, I>(tensors: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a MaterialTensor>,
    {
        let mut it = tensors.into_iter();
        let first = it.next()?;
        let mut sum = first.m;
        let mut count = 1usize;
        for t in it {
            debug_assert_eq!(t.dim, first.dim);
            for i in 0..3 {
                for j in 0..3 {
                    sum[i][j] += t.m[i][j];
                }
            }
            count += 1;
        }
        let inv = 1.0 / count as f64;
        sum.iter_mut().flatten().for_each(|v| *v *= inv);
        Some(Self { dim: first.dim, m: sum })
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        match self.dim {
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    /// Sylvester's criterion on the leading principal minors.
    pub fn is_spd(&self) -> bool {
        let m = &self.m;
        let all_finite = m.iter().flatten().all(|v| v.is_finite());
        let d1 = m[0][0];
        let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        all_finite && d1 > 0.0 && d2 > 0.0 && (self.dim == 2 || self.determinant() > 0.0)
    }

    pub fn check_spd(&self) -> Result<()> {
        if self.is_spd() {
            Ok(())
        } else {
            Err(AmgError::NotSpd(format!("{:?}", self.leading_block())))
        }
    }

    fn leading_block(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.m[i][..self.dim].to_vec()).collect()
    }

    /// Closed-form adjugate inverse; fails when the determinant is not
    /// positive.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if !(det > 0.0) || !det.is_finite() {
            return Err(AmgError::NotSpd(format!("determinant {det}")));
        }
        let mut out = [[0.0; 3]; 3];
        let m = &self.m;
        match self.dim {
            2 => {
                out[0][0] = m[1][1] / det;
                out[1][1] = m[0][0] / det;
                out[0][1] = -m[0][1] / det;
                out[1][0] = -m[1][0] / det;
            }
            _ => {
                let cof = adjugate3(m);
                for i in 0..3 {
                    for j in 0..3 {
                        out[i][j] = cof[i][j] / det;
                    }
                }
            }
        }
        Ok(Self { dim: self.dim, m: out })
    }

    /// `v^T self v` over the leading `dim` components.
    pub fn quadratic_form(&self, v: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += v[i] * self.m[i][j] * v[j];
            }
        }
        s
    }

    /// `self v`.
    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[i] += self.m[i][j] * v[j];
            }
        }
        out
    }

    /// Eigenvalues in ascending order from the characteristic polynomial.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = &self.m;
        if self.dim == 2 {
            let tr = m[0][0] + m[1][1];
            let disc = ((m[0][0] - m[1][1]).powi(2) / 4.0 + m[0][1] * m[1][0]).max(0.0).sqrt();
            let mid = tr / 2.0;
            return vec![mid - disc, mid + disc];
        }
        // trigonometric solution of the symmetric cubic
        let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
        let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
        if p1 == 0.0 {
            let mut e = vec![m[0][0], m[1][1], m[2][2]];
            e.sort_by(f64::total_cmp);
            return e;
        }
        let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let mut b = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = (m[i][j] - if i == j { q } else { 0.0 }) / p;
            }
        }
        let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let r = (det_b / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let e2 = 3.0 * q - e1 - e3;
        let mut e = vec![e1, e2, e3];
        e.sort_by(f64::total_cmp);
        e
    }

    /// Lower-triangle components row by row: 3 values in 2D, 6 in 3D.
    pub fn lower_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(6);
        for i in 0..self.dim {
            for j in 0..=i {
                out.push(self.m[i][j]);
            }
        }
        out
    }
}

fn adjugate3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    [
        [
            m[1][1] * m[2][2] - m[1][2] * m[2][1],
            m[0][2] * m[2][1] - m[0][1] * m[2][2],
            m[0][1] * m[1][2] - m[0][2] * m[1][1],
        ],
        [
            m[1][2] * m[2][0] - m[1][0] * m[2][2],
            m[0][0] * m[2][2] - m[0][2] * m[2][0],
            m[0][2] * m[1][0] - m[0][0] * m[1][2],
        ],
        [
            m[1][0] * m[2][1] - m[1][1] * m[2][0],
            m[0][1] * m[2][0] - m[0][0] * m[2][1],
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
        ],
    ]
}

/// Inverse and determinant of a general (not necessarily symmetric) 2x2 or
/// 3x3 matrix, used for element Jacobians.
pub(crate) fn invert_small(dim: usize, m: &[[f64; 3]; 3]) -> Option<([[f64; 3]; 3], f64)> {
    let mut out = [[0.0; 3]; 3];
    let det = if dim == 2 {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det == 0.0 {
            return None;
        }
        out[0][0] = m[1][1] / det;
        out[1][1] = m[0][0] / det;
        out[0][1] = -m[0][1] / det;
        out[1][0] = -m[1][0] / det;
        det
    } else {
        let cof = adjugate3(m);
        let det = m[0][0] * cof[0][0] + m[0][1] * cof[1][0] + m[0][2] * cof[2][0];
        if det == 0.0 {
            return None;
        }
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = cof[i][j] / det;
            }
        }
        det
    };
    Some((out, det))
}
