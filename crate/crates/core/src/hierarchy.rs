//! Multilevel setup: strength, dropping, aggregation, prolongator smoothing
//! with the filtered operator, Galerkin coarse operators and auxiliary data
//! transfer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aggregation::{aggregate, coarsen_auxiliary, tentative_prolongator, Aggregation, FilteredGraph};
use crate::error::{AmgError, Result};
use crate::exec::Execution;
use crate::fem::AssembledProblem;
use crate::filter::{apply_drop_with, filter_matrix_with, one_norm_diagonal, DropKind, DropMask};
use crate::soc::{compute_soc_with, AuxiliaryData, SocKind, SocMatrix};
use crate::solvers::{Chebyshev, DenseLu};
use crate::sparse::{galerkin_product_with, CsrMatrix};

/// Coarse-size default for the 2D model problems.
pub const PLANAR_MAX_COARSE: usize = 50;
/// Coarse-size default for the annulus runs. With 6300 fine unknowns this
/// reproduces the reported level counts of the base-mesh parameter study.
pub const ANNULUS_MAX_COARSE: usize = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct AmgConfig {
    pub soc_kind: SocKind,
    pub drop_kind: DropKind,
    pub theta: f64,
    pub max_levels: usize,
    pub max_coarse_size: usize,
    pub omega_sym: f64,
    pub power_iterations: usize,
    pub chebyshev_degree: usize,
    pub chebyshev_eig_ratio: f64,
}

impl Default for AmgConfig {
    fn default() -> Self {
        Self {
            soc_kind: SocKind::MaterialDlap,
            drop_kind: DropKind::Pointwise,
            theta: 0.08,
            max_levels: 10,
            max_coarse_size: 5000,
            omega_sym: 4.0 / 3.0,
            power_iterations: 10,
            chebyshev_degree: 2,
            chebyshev_eig_ratio: 20.0,
        }
    }
}

impl AmgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(AmgError::ThetaOutOfRange(self.theta));
        }
        if self.max_levels < 1 {
            return Err(AmgError::InvalidConfig("max_levels must be >= 1".into()));
        }
        if self.chebyshev_degree < 1 || !(self.chebyshev_eig_ratio > 1.0) {
            return Err(AmgError::InvalidConfig("chebyshev degree must be >= 1 and eig_ratio > 1".into()));
        }
        Ok(())
    }
}

/// One level of the hierarchy. The coarsest level has no transfer
/// operators.
#[derive(Debug, Clone)]
pub struct Level {
    pub a: CsrMatrix,
    pub p: Option<CsrMatrix>,
    /// `P^T`, stored for restriction.
    pub r: Option<CsrMatrix>,
    pub aux: AuxiliaryData,
    pub smoother: Chebyshev,
    pub aggregation: Option<Aggregation>,
    /// Spectral estimate used for prolongator smoothing, if smoothing ran.
    pub prolongator_lambda: Option<f64>,
    /// Kept off-diagonal edges of the filtered graph.
    pub kept_edges: usize,
}

impl Level {
    pub fn n(&self) -> usize {
        self.a.n_rows()
    }
}

/// Why coarsening ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The coarsest operator has at most `max_coarse_size` rows.
    CoarseSizeReached,
    /// `max_levels` levels were built before reaching the coarse size.
    MaxLevels,
    /// Aggregation produced only singletons on the given level.
    Stagnated { level: usize },
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub levels: Vec<Level>,
    pub config: AmgConfig,
    pub coarse_lu: DenseLu,
    pub termination: Termination,
}

impl Hierarchy {
    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn operator_complexity(&self) -> f64 {
        operator_complexity(self)
    }

    /// True when coarsening stopped at the requested coarse size.
    pub fn reached_coarse_size(&self) -> bool {
        self.termination == Termination::CoarseSizeReached
    }

    pub fn summary(&self) -> HierarchySummary {
        HierarchySummary {
            levels: self
                .levels
                .iter()
                .map(|l| LevelSummary {
                    n: l.n(),
                    nnz: l.a.nnz(),
                    aggregates: l.aggregation.as_ref().map(|a| a.n_aggregates),
                    kept_edges: l.kept_edges,
                    prolongator_lambda: l.prolongator_lambda,
                    smoother_lambda: l.smoother.lambda_max,
                })
                .collect(),
            operator_complexity: self.operator_complexity(),
            termination: self.termination,
            config: self.config.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSummary {
    pub n: usize,
    pub nnz: usize,
    pub aggregates: Option<usize>,
    pub kept_edges: usize,
    pub prolongator_lambda: Option<f64>,
    pub smoother_lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchySummary {
    pub levels: Vec<LevelSummary>,
    pub operator_complexity: f64,
    pub termination: Termination,
    pub config: AmgConfig,
}

const POWER_METHOD_SEED: u64 = 0;

/// `sum_l nnz(A_l) / nnz(A_0)`.
pub fn operator_complexity(h: &Hierarchy) -> f64 {
    let fine = h.levels[0].a.nnz() as f64;
    h.levels.iter().map(|l| l.a.nnz() as f64).sum::<f64>() / fine
}

/// Power-method estimate of the largest eigenvalue of `D^-1 A`. The start
/// vector is a fixed-seed perturbation of the ones vector (entries in
/// `[0.5, 1.5]`): the plain ones vector is an exact eigenvector whenever the
/// operator has zero interior row sums plus decoupled identity rows. The
/// returned value is the generalised Rayleigh quotient `x^T A x / x^T D x`
/// of the last iterate.
pub fn estimate_spectral_radius(a: &CsrMatrix, dhat: &[f64], iters: usize) -> f64 {
    estimate_spectral_radius_with(Execution::default(), a, dhat, iters)
}

pub fn estimate_spectral_radius_with(exec: Execution, a: &CsrMatrix, dhat: &[f64], iters: usize) -> f64 {
    let n = a.n_rows();
    if n == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_METHOD_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    for _ in 0..iters {
        let cur = &x;
        let mut y = exec.map(n, |i| a.row_dot(i, cur) / dhat[i]);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            break;
        }
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;
    }
    let ax = exec.map(n, |i| a.row_dot(i, &x));
    let num: f64 = x.iter().zip(&ax).map(|(u, v)| u * v).sum();
    let den: f64 = x.iter().zip(dhat).map(|(u, d)| u * u * d).sum();
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// `P = (I - omega D^-1 A_F) P_hat` with `omega = omega_sym / lambda`.
/// A non-positive or non-finite `lambda` (or `omega = 0`) returns `P_hat`.
pub fn smooth_prolongator(
    a_f: &CsrMatrix,
    dhat: &[f64],
    p_hat: &CsrMatrix,
    omega_sym: f64,
    lambda: f64,
) -> Result<CsrMatrix> {
    smooth_prolongator_with(Execution::default(), a_f, dhat, p_hat, omega_sym, lambda)
}

pub fn smooth_prolongator_with(
    exec: Execution,
    a_f: &CsrMatrix,
    dhat: &[f64],
    p_hat: &CsrMatrix,
    omega_sym: f64,
    lambda: f64,
) -> Result<CsrMatrix> {
    if dhat.len() != a_f.n_rows() {
        return Err(AmgError::DimensionMismatch { expected: a_f.n_rows(), actual: dhat.len() });
    }
    let omega = if lambda > 0.0 && lambda.is_finite() { omega_sym / lambda } else { 0.0 };
    if omega == 0.0 {
        return Ok(p_hat.clone());
    }
    let ap = a_f.matmul_with(exec, p_hat)?;
    let rows = exec.map(p_hat.n_rows(), |i| {
        let scale = omega / dhat[i];
        let (pc, pv) = p_hat.row(i);
        let (ac, av) = ap.row(i);
        let mut row = Vec::with_capacity(pc.len() + ac.len());
        let (mut a, mut b) = (0, 0);
        while a < pc.len() || b < ac.len() {
            let ca = pc.get(a).copied().unwrap_or(usize::MAX);
            let cb = ac.get(b).copied().unwrap_or(usize::MAX);
            if ca < cb {
                row.push((ca, pv[a]));
                a += 1;
            } else if cb < ca {
                row.push((cb, -scale * av[b]));
                b += 1;
            } else {
                row.push((ca, pv[a] - scale * av[b]));
                a += 1;
                b += 1;
            }
        }
        row
    });
    Ok(CsrMatrix::from_sorted_rows(p_hat.n_rows(), p_hat.n_cols(), rows))
}

fn level_smoother(exec: Execution, a: &CsrMatrix, config: &AmgConfig) -> Chebyshev {
    let diag: Vec<f64> = a
        .extract_diagonal()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if d > 0.0 {
                d
            } else {
                let s: f64 = a.row(i).1.iter().map(|v| v.abs()).sum();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            }
        })
        .collect();
    let lambda = estimate_spectral_radius_with(exec, a, &diag, config.power_iterations);
    Chebyshev::new(&diag, lambda, config.chebyshev_degree, config.chebyshev_eig_ratio)
}

/// Builds the hierarchy for `problem`.
pub fn build_hierarchy(problem: &AssembledProblem, config: &AmgConfig) -> Result<Hierarchy> {
    build_hierarchy_with(Execution::default(), problem, config)
}

pub fn build_hierarchy_with(exec: Execution, problem: &AssembledProblem, config: &AmgConfig) -> Result<Hierarchy> {
    build_from_operator(exec, problem.matrix.clone(), problem.auxiliary(), config)
}

/// Builds a hierarchy from an operator and its auxiliary data.
pub fn build_from_operator(exec: Execution, a: CsrMatrix, aux: AuxiliaryData, config: &AmgConfig) -> Result<Hierarchy> {
    config.validate()?;
    if !a.is_square() {
        return Err(AmgError::DimensionMismatch { expected: a.n_rows(), actual: a.n_cols() });
    }
    if aux.len() != a.n_rows() {
        return Err(AmgError::DimensionMismatch { expected: a.n_rows(), actual: aux.len() });
    }
    let mut levels = Vec::new();
    let mut a = a;
    let mut aux = aux;
    let termination = loop {
        let smoother = level_smoother(exec, &a, config);
        let n = a.n_rows();
        if n <= config.max_coarse_size {
            levels.push(coarsest(a, aux, smoother));
            break Termination::CoarseSizeReached;
        }
        if levels.len() + 1 >= config.max_levels {
            levels.push(coarsest(a, aux, smoother));
            break Termination::MaxLevels;
        }

        let (soc, mask) = strength_and_mask(exec, &a, &aux, config)?;
        let graph = FilteredGraph::from_mask(&soc, &mask)?;
        let excluded: Vec<bool> = (0..n).map(|i| a.is_isolated_row(i)).collect();
        let agg = aggregate(&graph, &excluded)?;
        if agg.n_aggregates == 0 || agg.is_trivial() || agg.n_aggregates >= n {
            let level = levels.len();
            levels.push(coarsest(a, aux, smoother));
            break Termination::Stagnated { level };
        }

        let p_hat = tentative_prolongator(&agg, n)?;
        let a_f = filter_matrix_with(exec, &a, &mask)?;
        let dhat = one_norm_diagonal(&a_f)?.values;
        let lambda = estimate_spectral_radius_with(exec, &a_f, &dhat, config.power_iterations);
        let p = smooth_prolongator_with(exec, &a_f, &dhat, &p_hat, config.omega_sym, lambda)?;
        let a_c = galerkin_product_with(exec, &p, &a)?;
        let aux_c = coarsen_auxiliary(&agg, &aux)?;
        let r = p.transpose();
        levels.push(Level {
            a,
            p: Some(p),
            r: Some(r),
            aux,
            smoother,
            aggregation: Some(agg),
            prolongator_lambda: (lambda > 0.0).then_some(lambda),
            kept_edges: mask.n_kept_edges(),
        });
        a = a_c;
        aux = aux_c;
    };
    let coarse_lu = DenseLu::factor(&levels.last().expect("at least one level").a)?;
    Ok(Hierarchy { levels, config: config.clone(), coarse_lu, termination })
}

/// Strength matrix and drop mask used for aggregation on one level. Cut-drop
/// masks are symmetrized so the aggregation graph is undirected.
pub fn strength_and_mask(
    exec: Execution,
    a: &CsrMatrix,
    aux: &AuxiliaryData,
    config: &AmgConfig,
) -> Result<(SocMatrix, DropMask)> {
    let soc = compute_soc_with(exec, config.soc_kind, a, aux)?;
    let mut mask = apply_drop_with(exec, config.drop_kind, &soc, config.theta)?;
    if config.drop_kind == DropKind::CutDrop {
        mask = mask.symmetrized();
    }
    Ok((soc, mask))
}

fn coarsest(a: CsrMatrix, aux: AuxiliaryData, smoother: Chebyshev) -> Level {
    Level { a, p: None, r: None, aux, smoother, aggregation: None, prolongator_lambda: None, kept_edges: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, &t).unwrap()
    }

    #[test]
    fn spectral_radius_examples() {
        assert!((estimate_spectral_radius(&CsrMatrix::identity(4), &[1.0; 4], 10) - 1.0).abs() < 1e-15);
        let d = CsrMatrix::from_dense(&[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 4.0]]);
        let l = estimate_spectral_radius(&d, &[1.0; 3], 10);
        assert!((l - 4.0).abs() < 1e-5, "{l}");
        assert!(l <= 4.0);
    }

    #[test]
    fn smoothing_with_zero_omega_is_identity() {
        let a = tridiag(4);
        let p_hat = CsrMatrix::from_dense(&[vec![1.0], vec![1.0], vec![1.0], vec![1.0]]);
        let p = smooth_prolongator(&a, &[4.0; 4], &p_hat, 4.0 / 3.0, f64::INFINITY).unwrap();
        assert_eq!(p, p_hat);
        let p = smooth_prolongator(&a, &[4.0; 4], &p_hat, 4.0 / 3.0, 0.0).unwrap();
        assert_eq!(p, p_hat);
    }

    #[test]
    fn smoothed_prolongator_by_hand() {
        // one aggregate of three nodes on tridiag(-1, 2, -1)
        let a = tridiag(3);
        let p_hat = CsrMatrix::from_dense(&[vec![1.0], vec![1.0], vec![1.0]]);
        let dhat = one_norm_diagonal(&a).unwrap().values; // (3, 4, 3)
        let lambda = 1.5;
        let p = smooth_prolongator(&a, &dhat, &p_hat, 4.0 / 3.0, lambda).unwrap();
        let omega = (4.0 / 3.0) / lambda;
        // A * 1 = (1, 0, 1)
        let expect = [1.0 - omega / 3.0, 1.0, 1.0 - omega / 3.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((p.get(i, 0).unwrap() - e).abs() < 1e-15);
        }
    }

    #[test]
    fn small_problem_is_single_level() {
        let a = tridiag(10);
        let aux = AuxiliaryData {
            coords: (0..10).map(|i| [i as f64, 0.0, 0.0]).collect(),
            materials: vec![crate::fem::MaterialTensor::identity(2); 10],
        };
        let h = build_from_operator(Execution::default(), a, aux, &AmgConfig::default()).unwrap();
        assert_eq!(h.n_levels(), 1);
        assert_eq!(h.operator_complexity(), 1.0);
        assert_eq!(h.termination, Termination::CoarseSizeReached);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = AmgConfig { theta: 1.5, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = AmgConfig { max_levels: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
