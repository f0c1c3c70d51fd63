use super::{merge_sorted_row, CsrMatrix};
use crate::error::{AmgError, Result};
use crate::exec::Execution;

impl CsrMatrix {
    /// `y = A x`, summing in stored-entry order.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.spmv_with(Execution::default(), x)
    }

    pub fn spmv_with(&self, exec: Execution, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n_rows()];
        self.spmv_into(exec, x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, exec: Execution, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.n_cols() {
            return Err(AmgError::DimensionMismatch { expected: self.n_cols(), actual: x.len() });
        }
        if y.len() != self.n_rows() {
            return Err(AmgError::DimensionMismatch { expected: self.n_rows(), actual: y.len() });
        }
        exec.fill(y, |i| self.row_dot(i, x));
        Ok(())
    }

    #[inline]
    pub(crate) fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(i);
        let mut s = 0.0;
        for (&c, &v) in cols.iter().zip(vals) {
            s += v * x[c];
        }
        s
    }

    /// `b - A x`.
    pub fn residual(&self, exec: Execution, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n_rows() {
            return Err(AmgError::DimensionMismatch { expected: self.n_rows(), actual: b.len() });
        }
        if x.len() != self.n_cols() {
            return Err(AmgError::DimensionMismatch { expected: self.n_cols(), actual: x.len() });
        }
        Ok(exec.map(self.n_rows(), |i| b[i] - self.row_dot(i, x)))
    }

    pub fn transpose(&self) -> CsrMatrix {
        let (m, n) = (self.n_rows(), self.n_cols());
        let mut offsets = vec![0usize; n + 1];
        for &c in self.col_indices() {
            offsets[c + 1] += 1;
        }
        for j in 0..n {
            offsets[j + 1] += offsets[j];
        }
        let mut next = offsets.clone();
        let mut cols = vec![0usize; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        // rows visited in ascending order, so each transposed row is sorted
        for i in 0..m {
            let (rc, rv) = self.row(i);
            for (&c, &v) in rc.iter().zip(rv) {
                cols[next[c]] = i;
                vals[next[c]] = v;
                next[c] += 1;
            }
        }
        CsrMatrix::new(n, m, offsets, cols, vals).expect("transpose preserves CSR invariants")
    }

    /// Sparse product `self * rhs`.
    pub fn matmul(&self, rhs: &CsrMatrix) -> Result<CsrMatrix> {
        self.matmul_with(Execution::default(), rhs)
    }

    pub fn matmul_with(&self, exec: Execution, rhs: &CsrMatrix) -> Result<CsrMatrix> {
        if self.n_cols() != rhs.n_rows() {
            return Err(AmgError::DimensionMismatch { expected: self.n_cols(), actual: rhs.n_rows() });
        }
        let rows = exec.map(self.n_rows(), |i| {
            let (ac, av) = self.row(i);
            let mut acc = Vec::new();
            for (&k, &a) in ac.iter().zip(av) {
                let (bc, bv) = rhs.row(k);
                acc.extend(bc.iter().zip(bv).map(|(&j, &b)| (j, a * b)));
            }
            merge_sorted_row(&mut acc);
            acc
        });
        Ok(CsrMatrix::from_sorted_rows(self.n_rows(), rhs.n_cols(), rows))
    }

    /// Diagonal entries, zero where not stored.
    pub fn extract_diagonal(&self) -> Vec<f64> {
        let n = self.n_rows().min(self.n_cols());
        (0..n).map(|i| self.get(i, i).unwrap_or(0.0)).collect()
    }

    /// Sum of stored values per row.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows()).map(|i| self.row(i).1.iter().sum()).collect()
    }
}

/// Coarse operator `P^T A P` with a fully merged pattern.
pub fn galerkin_product(p: &CsrMatrix, a: &CsrMatrix) -> Result<CsrMatrix> {
    galerkin_product_with(Execution::default(), p, a)
}

pub fn galerkin_product_with(exec: Execution, p: &CsrMatrix, a: &CsrMatrix) -> Result<CsrMatrix> {
    if !a.is_square() {
        return Err(AmgError::DimensionMismatch { expected: a.n_rows(), actual: a.n_cols() });
    }
    if p.n_rows() != a.n_rows() {
        return Err(AmgError::DimensionMismatch { expected: a.n_rows(), actual: p.n_rows() });
    }
    let ap = a.matmul_with(exec, p)?;
    p.transpose().matmul_with(exec, &ap)
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
