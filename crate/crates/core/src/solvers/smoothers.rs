use crate::exec::Execution;
use crate::sparse::CsrMatrix;

/// Chebyshev polynomial smoother in `D^-1 A` on the interval
/// `[lambda_max / eig_ratio, 1.1 * lambda_max]`.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    pub inv_diag: Vec<f64>,
    pub lambda_max: f64,
    pub degree: usize,
    pub eig_ratio: f64,
}

/// Upper bound of the Chebyshev interval relative to the estimate.
pub const LAMBDA_SAFETY: f64 = 1.1;

impl Chebyshev {
    pub fn new(diag: &[f64], lambda_max: f64, degree: usize, eig_ratio: f64) -> Self {
        Self { inv_diag: diag.iter().map(|d| 1.0 / d).collect(), lambda_max, degree, eig_ratio }
    }

    /// `(lower, upper)` ends of the target interval.
    pub fn interval(&self) -> (f64, f64) {
        (self.lambda_max / self.eig_ratio, LAMBDA_SAFETY * self.lambda_max)
    }

    pub fn apply(&self, exec: Execution, a: &CsrMatrix, b: &[f64], x: &mut [f64]) {
        if self.degree == 0 || !(self.lambda_max > 0.0) {
            return;
        }
        let (lo, hi) = self.interval();
        let theta = 0.5 * (hi + lo);
        let delta = 0.5 * (hi - lo);
        let sigma = theta / delta;
        let mut rho = 1.0 / sigma;
        let n = x.len();

        let scaled_residual = |x: &[f64]| exec.map(n, |i| self.inv_diag[i] * (b[i] - a.row_dot(i, x)));
        let r = scaled_residual(x);
        let mut d: Vec<f64> = r.iter().map(|v| v / theta).collect();
        for k in 0..self.degree {
            for (xi, di) in x.iter_mut().zip(&d) {
                *xi += di;
            }
            if k + 1 == self.degree {
                break;
            }
            let r = scaled_residual(x);
            let rho_new = 1.0 / (2.0 * sigma - rho);
            let c1 = rho_new * rho;
            let c2 = 2.0 * rho_new / delta;
            for (di, ri) in d.iter_mut().zip(&r) {
                *di = c1 * *di + c2 * ri;
            }
            rho = rho_new;
        }
    }
}

/// Applies a degree-`degree` Chebyshev smoother with the diagonal `dhat`
/// and returns the updated iterate.
pub fn chebyshev_smooth(
    a: &CsrMatrix,
    dhat: &[f64],
    b: &[f64],
    x: &[f64],
    degree: usize,
    lambda_max: f64,
    eig_ratio: f64,
) -> Vec<f64> {
    let mut out = x.to_vec();
    Chebyshev::new(dhat, lambda_max, degree, eig_ratio).apply(Execution::default(), a, b, &mut out);
    out
}

/// `sweeps` steps of `x <- x + omega D^-1 (b - A x)`.
pub fn jacobi_smooth(a: &CsrMatrix, dhat: &[f64], b: &[f64], x: &[f64], sweeps: usize, omega: f64) -> Vec<f64> {
    let exec = Execution::default();
    let mut x = x.to_vec();
    for _ in 0..sweeps {
        let cur = &x;
        x = exec.map(x.len(), |i| cur[i] + omega * (b[i] - a.row_dot(i, cur)) / dhat[i]);
    }
    x
}
