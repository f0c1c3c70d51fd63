use serde::Serialize;

use crate::error::{AmgError, Result};
use crate::exec::Execution;
use crate::sparse::ops::{dot, norm2};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy)]
pub struct PcgOptions {
    /// Stop once `||r|| <= rel_tol * ||r0||`.
    pub rel_tol: f64,
    /// When set, stop once `||r|| <= abs_tol` instead.
    pub abs_tol: Option<f64>,
    pub max_iters: usize,
}

impl Default for PcgOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: None, max_iters: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// `||r_k|| / ||r_0||` for `k = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub achieved_tolerance: f64,
}

/// Preconditioned conjugate gradients from a zero initial guess.
///
/// `precond` must act as a fixed symmetric positive definite operator.
pub fn pcg<F>(a: &CsrMatrix, b: &[f64], mut precond: F, opts: &PcgOptions) -> Result<(Vec<f64>, SolveReport)>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = a.n_rows();
    if b.len() != n {
        return Err(AmgError::DimensionMismatch { expected: n, actual: b.len() });
    }
    let exec = Execution::default();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let r0 = norm2(&r);
    let mut history = vec![if r0 > 0.0 { 1.0 } else { 0.0 }];
    let done = |rn: f64| match opts.abs_tol {
        Some(t) => rn <= t,
        None => rn <= opts.rel_tol * r0,
    };
    let report = |history: Vec<f64>, converged: bool| SolveReport {
        iterations: history.len() - 1,
        achieved_tolerance: *history.last().unwrap(),
        residual_history: history,
        converged,
    };
    if r0 == 0.0 || done(r0) {
        return Ok((x, report(history, true)));
    }

    let mut z = precond(&r);
    let mut rz = dot(&r, &z);
    if !(rz > 0.0) {
        return Err(AmgError::Breakdown { iteration: 0, curvature: rz });
    }
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    for it in 1..=opts.max_iters {
        a.spmv_into(exec, &p, &mut ap)?;
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(AmgError::Breakdown { iteration: it, curvature: pap });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rn = norm2(&r);
        history.push(rn / r0);
        if done(rn) {
            return Ok((x, report(history, true)));
        }
        z = precond(&r);
        let rz_new = dot(&r, &z);
        if !(rz_new > 0.0) {
            return Err(AmgError::Breakdown { iteration: it, curvature: rz_new });
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Ok((x, report(history, false)))
}

/// Unpreconditioned CG.
pub fn cg(a: &CsrMatrix, b: &[f64], opts: &PcgOptions) -> Result<(Vec<f64>, SolveReport)> {
    pcg(a, b, |r| r.to_vec(), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_takes_one_iteration() {
        let (x, rep) = cg(&CsrMatrix::identity(5), &[1.0, 2.0, 3.0, 4.0, 5.0], &PcgOptions::default()).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged);
        assert_eq!(x, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(rep.residual_history.len(), 2);
    }

    #[test]
    fn jacobi_on_diagonal_takes_one_iteration() {
        let diag = [1.0, 10.0, 100.0, 0.5];
        let a = CsrMatrix::from_triplets(4, 4, &[(0, 0, 1.0), (1, 1, 10.0), (2, 2, 100.0), (3, 3, 0.5)]).unwrap();
        let (x, rep) = pcg(&a, &[1.0; 4], |r| r.iter().zip(&diag).map(|(r, d)| r / d).collect(), &PcgOptions::default())
            .unwrap();
        assert_eq!(rep.iterations, 1);
        for (xi, d) in x.iter().zip(diag) {
            assert!((xi - 1.0 / d).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_rhs_is_immediately_converged() {
        let (x, rep) = cg(&CsrMatrix::identity(3), &[0.0; 3], &PcgOptions::default()).unwrap();
        assert_eq!(rep.iterations, 0);
        assert_eq!(x, vec![0.0; 3]);
    }

    #[test]
    fn indefinite_operator_breaks_down() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        let r = cg(&a, &[0.0, 1.0], &PcgOptions::default());
        assert!(matches!(r, Err(AmgError::Breakdown { .. })));
    }

    #[test]
    fn max_iters_reports_non_convergence() {
        let n = 30;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t).unwrap();
        let opts = PcgOptions { max_iters: 3, ..Default::default() };
        let (_, rep) = cg(&a, &vec![1.0; n], &opts).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 3);
        assert_eq!(rep.residual_history.len(), 4);
    }

    #[test]
    fn absolute_tolerance() {
        let a = CsrMatrix::from_dense(&[vec![4.0, 1.0], vec![1.0, 3.0]]);
        let opts = PcgOptions { abs_tol: Some(1e3), ..Default::default() };
        let (_, rep) = cg(&a, &[1.0, 2.0], &opts).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged);
    }
}
