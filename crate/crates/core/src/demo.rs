//! Weighted-Jacobi smoothing of a random error, for visualising which error
//! components a pointwise smoother leaves behind.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fem::AssembledProblem;
use crate::solvers::jacobi_smooth;

pub const DEMO_OMEGA: f64 = 2.0 / 3.0;

#[derive(Debug, Clone)]
pub struct ErrorField {
    pub coords: Vec<[f64; 3]>,
    pub error: Vec<f64>,
    pub sweeps: usize,
    pub seed: u64,
}

/// Random error uniform in `[-1, 1]`, zero on Dirichlet nodes.
pub fn random_error(problem: &AssembledProblem, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    problem
        .dirichlet
        .iter()
        .map(|&d| {
            let v: f64 = rng.gen_range(-1.0..=1.0);
            if d {
                0.0
            } else {
                v
            }
        })
        .collect()
}

/// Applies `sweeps` damped Jacobi steps to `A e = 0`.
pub fn jacobi_error_demo(problem: &AssembledProblem, sweeps: usize, seed: u64) -> ErrorField {
    let e0 = random_error(problem, seed);
    let diag = problem.matrix.extract_diagonal();
    let zero = vec![0.0; e0.len()];
    let error = jacobi_smooth(&problem.matrix, &diag, &zero, &e0, sweeps, DEMO_OMEGA);
    ErrorField { coords: problem.coords.clone(), error, sweeps, seed }
}

impl ErrorField {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "node,x,y,error")?;
        for (i, (c, e)) in self.coords.iter().zip(&self.error).enumerate() {
            writeln!(w, "{i},{},{},{}", c[0], c[1], e)?;
        }
        Ok(())
    }

    /// Values on the nodes with `|x - x0| < tol`, ordered by `y`.
    pub fn slice_at_x(&self, x0: f64, tol: f64) -> Vec<(f64, f64)> {
        let mut s: Vec<(f64, f64)> = self
            .coords
            .iter()
            .zip(&self.error)
            .filter(|(c, _)| (c[0] - x0).abs() < tol)
            .map(|(c, &e)| (c[1], e))
            .collect();
        s.sort_by(|a, b| a.0.total_cmp(&b.0));
        s
    }
}

/// `sum |v_{k+1} - v_k|`.
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}
