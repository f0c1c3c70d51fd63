use crate::error::{AmgError, Result};
use crate::sparse::CsrMatrix;

/// Row-major LU factorisation with partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(AmgError::DimensionMismatch { expected: a.n_rows(), actual: a.n_cols() });
        }
        let n = a.n_rows();
        let mut lu = vec![0.0; n * n];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                lu[i * n + j] += v;
            }
        }
        Self::factor_dense(n, lu)
    }

    pub fn factor_dense(n: usize, mut lu: Vec<f64>) -> Result<Self> {
        assert_eq!(lu.len(), n * n);
        let scale = lu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = scale * f64::EPSILON * n.max(1) as f64;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pmax > tiny) {
                return Err(AmgError::SingularMatrix { column: k, pivot: if pmax < 0.0 { 0.0 } else { pmax } });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let row_k = &head[k * n..(k + 1) * n];
            for row_i in tail.chunks_exact_mut(n) {
                let l = row_i[k] / pivot;
                if l == 0.0 {
                    continue;
                }
                row_i[k] = l;
                for (x, &u) in row_i[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                    *x -= l * u;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(AmgError::DimensionMismatch { expected: n, actual: b.len() });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, y)| u * y).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }
}

/// One-shot dense factor-and-solve.
pub fn coarse_solve(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
    DenseLu::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let b = vec![3.0, -1.0, 2.5];
        assert_eq!(coarse_solve(&CsrMatrix::identity(3), &b).unwrap(), b);
        let d = CsrMatrix::from_dense(&[vec![2.0, 0.0], vec![0.0, 4.0]]);
        assert_eq!(coarse_solve(&d, &[2.0, 4.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn needs_pivoting() {
        let a = CsrMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(coarse_solve(&a, &[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
    }

    #[test]
    fn singular_is_reported() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(coarse_solve(&a, &[1.0, 1.0]), Err(AmgError::SingularMatrix { column: 1, .. })));
    }
}
