#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use sa_amg::aggregation::{aggregate, coarsen_auxiliary, tentative_prolongator, FilteredGraph};
use sa_amg::fem::MaterialTensor;
use sa_amg::filter::{drop_cutdrop, drop_pointwise, filter_matrix};
use sa_amg::soc::{soc_dlap, soc_material_dlap, soc_sa, AuxiliaryData, SocKind, SocMatrix};
use sa_amg::solvers::{cg, PcgOptions};
use sa_amg::sparse::galerkin_product;
use sa_amg::CsrMatrix;

fn sparse(rows: usize, cols: usize) -> impl Strategy<Value = CsrMatrix> {
    proptest::collection::vec(proptest::option::weighted(0.35, -3.0f64..3.0), rows * cols).prop_map(move |cells| {
        let t: Vec<_> = cells
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.map(|v| (k / cols, k % cols, v)))
            .collect();
        CsrMatrix::from_triplets(rows, cols, &t).unwrap()
    })
}

fn square_and_p() -> impl Strategy<Value = (CsrMatrix, CsrMatrix)> {
    (1usize..=16).prop_flat_map(|n| (1..=n).prop_flat_map(move |m| (sparse(n, n), sparse(n, m))))
}

fn symmetrize(a: &CsrMatrix) -> CsrMatrix {
    let at = a.transpose();
    let mut t = Vec::new();
    for m in [a, &at] {
        for i in 0..m.n_rows() {
            let (c, v) = m.row(i);
            t.extend(c.iter().zip(v).map(|(&j, &x)| (i, j, 0.5 * x)));
        }
    }
    CsrMatrix::from_triplets(a.n_rows(), a.n_cols(), &t).unwrap()
}

/// Symmetric, strictly diagonally dominant with positive diagonal.
fn spd(n: usize) -> impl Strategy<Value = CsrMatrix> {
    sparse(n, n).prop_map(move |a| {
        let s = symmetrize(&a);
        let mut t = Vec::new();
        for i in 0..n {
            let (c, v) = s.row(i);
            let mut off = 0.0;
            for (&j, &x) in c.iter().zip(v) {
                if j != i {
                    t.push((i, j, -x.abs()));
                    off += x.abs();
                }
            }
            t.push((i, i, off + 1.0));
        }
        symmetrize(&CsrMatrix::from_triplets(n, n, &t).unwrap())
    })
}

/// A 2D grid Laplacian-like pattern with random coordinates and tensors.
fn grid_problem() -> impl Strategy<Value = (CsrMatrix, AuxiliaryData)> {
    (2usize..6, 2usize..6).prop_flat_map(|(nx, ny)| {
        let n = nx * ny;
        (
            proptest::collection::vec((0.5f64..5.0, 0.5f64..5.0, -0.4f64..0.4), n),
            proptest::collection::vec((-0.2f64..0.2, -0.2f64..0.2), n),
        )
            .prop_map(move |(tensors, jitter)| {
                let id = |i: usize, j: usize| j * nx + i;
                let mut t = Vec::new();
                for j in 0..ny {
                    for i in 0..nx {
                        let mut deg = 0.0;
                        for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                            let (a, b) = (i as i64 + di, j as i64 + dj);
                            if a >= 0 && b >= 0 && (a as usize) < nx && (b as usize) < ny {
                                t.push((id(i, j), id(a as usize, b as usize), -1.0));
                                deg += 1.0;
                            }
                        }
                        t.push((id(i, j), id(i, j), deg + 0.1));
                    }
                }
                let a = CsrMatrix::from_triplets(n, n, &t).unwrap();
                let coords = (0..n).map(|k| [(k % nx) as f64 + jitter[k].0, (k / nx) as f64 + jitter[k].1, 0.0]).collect();
                let materials = tensors
                    .iter()
                    .map(|&(a, b, c)| {
                        let off = c * (a * b).sqrt();
                        MaterialTensor::from_matrix(2, [[a, off, 0.0], [off, b, 0.0], [0.0, 0.0, 0.0]]).unwrap()
                    })
                    .collect();
                (a, AuxiliaryData { coords, materials })
            })
    })
}

fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(1e-300)
}

fn max_abs(m: &CsrMatrix) -> f64 {
    m.values().iter().fold(0.0f64, |s, v| s.max(v.abs()))
}

fn assert_symmetric(m: &CsrMatrix, tol: f64) -> Result<(), TestCaseError> {
    let scale = max_abs(m);
    for i in 0..m.n_rows() {
        let (c, v) = m.row(i);
        for (&j, &x) in c.iter().zip(v) {
            let y = m.get(j, i).unwrap_or(0.0);
            prop_assert!(rel_close(x, y, scale, tol), "({i},{j}) {x} vs {y}");
        }
    }
    Ok(())
}

fn soc_row(values: &[f64]) -> SocMatrix {
    let n = values.len() + 1;
    let mut t = vec![(0, 0, 1.0)];
    t.extend(values.iter().enumerate().map(|(k, &v)| (0, k + 1, v)));
    t.extend((1..n).map(|i| (i, i, 1.0)));
    SocMatrix { matrix: CsrMatrix::from_triplets(n, n, &t).unwrap(), kind: SocKind::Sa }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn galerkin_matches_dense((a, p) in square_and_p()) {
        let c = galerkin_product(&p, &a).unwrap();
        let (ad, pd) = (a.to_dense(), p.to_dense());
        let (n, m) = (a.n_rows(), p.n_cols());
        let mut scale: f64 = 0.0;
        let mut dense = vec![vec![0.0; m]; m];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        s += pd[k][i] * ad[k][l] * pd[l][j];
                    }
                }
                *out = s;
                scale = scale.max(s.abs());
            }
        }
        for i in 0..m {
            for j in 0..m {
                prop_assert!(rel_close(c.get(i, j).unwrap_or(0.0), dense[i][j], scale.max(1.0), 1e-12));
            }
        }
    }

    #[test]
    fn galerkin_of_symmetric_is_symmetric((a, p) in square_and_p()) {
        let c = galerkin_product(&p, &symmetrize(&a)).unwrap();
        assert_symmetric(&c, 1e-12)?;
    }

    #[test]
    fn spmv_is_linear(a in sparse(9, 7), x in proptest::collection::vec(-5.0f64..5.0, 7), y in proptest::collection::vec(-5.0f64..5.0, 7)) {
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (ax, ay, as_) = (a.spmv(&x).unwrap(), a.spmv(&y).unwrap(), a.spmv(&sum).unwrap());
        let scale = max_abs(&a) * 10.0 * 7.0;
        for i in 0..9 {
            prop_assert!(rel_close(as_[i], ax[i] + ay[i], scale, 1e-12));
        }
    }

    #[test]
    fn transpose_is_an_involution(a in sparse(6, 8)) {
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn pointwise_is_monotone(vals in proptest::collection::vec(0.0f64..1.0, 1..12), t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0) {
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let s = soc_row(&vals);
        let (k_lo, k_hi) = (drop_pointwise(&s, lo).unwrap(), drop_pointwise(&s, hi).unwrap());
        prop_assert!(k_lo.keep().iter().zip(k_hi.keep()).all(|(a, b)| *a || !*b));
    }

    #[test]
    fn cutdrop_keeps_a_prefix_of_the_sorted_row(vals in proptest::collection::vec(0.01f64..1.0, 1..12), theta in 0.0f64..=1.0) {
        let s = soc_row(&vals);
        let mask = drop_cutdrop(&s, theta).unwrap();
        let r = s.matrix.row_range(0);
        let (cols, v) = s.matrix.row(0);
        let kept: Vec<f64> = cols.iter().zip(v).zip(&mask.keep()[r.clone()]).filter(|((&c, _), &k)| c != 0 && k).map(|((_, &x), _)| x).collect();
        let dropped: Vec<f64> = cols.iter().zip(v).zip(&mask.keep()[r]).filter(|((&c, _), &k)| c != 0 && !k).map(|((_, &x), _)| x).collect();
        prop_assert!(!kept.is_empty());
        let min_kept = kept.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(dropped.iter().all(|&d| d < min_kept));
    }

    #[test]
    fn filtering_preserves_row_sums((a, aux) in grid_problem(), theta in 0.0f64..0.6) {
        let s = soc_material_dlap(&a, &aux).unwrap();
        let mask = drop_pointwise(&s, theta).unwrap();
        let f = filter_matrix(&a, &mask).unwrap();
        for (i, (x, y)) in a.row_sums().iter().zip(f.row_sums()).enumerate() {
            let mag: f64 = a.row(i).1.iter().map(|v| v.abs()).sum();
            prop_assert!((x - y).abs() <= 1e-12 * mag);
        }
    }

    #[test]
    fn soc_measures_are_symmetric((a, aux) in grid_problem()) {
        assert_symmetric(&soc_sa(&a).unwrap().matrix, 1e-12)?;
        assert_symmetric(&soc_dlap(&a, &aux).unwrap().matrix, 1e-12)?;
        assert_symmetric(&soc_material_dlap(&a, &aux).unwrap().matrix, 1e-12)?;
    }

    #[test]
    fn material_soc_with_scaled_identity_is_dlap((a, aux) in grid_problem(), c in 0.01f64..100.0) {
        let iso = AuxiliaryData { coords: aux.coords.clone(), materials: vec![MaterialTensor::isotropic(2, c); aux.len()] };
        let m = soc_material_dlap(&a, &iso).unwrap();
        let d = soc_dlap(&a, &iso).unwrap();
        for (x, y) in m.matrix.values().iter().zip(d.matrix.values()) {
            prop_assert!((x - y).abs() <= 1e-14 * x.abs().max(y.abs()).max(1e-300));
        }
    }

    #[test]
    fn soc_sa_is_scaling_invariant(a in spd(8), e in proptest::collection::vec(0.1f64..10.0, 8)) {
        let t: Vec<_> = (0..8).flat_map(|i| {
            let (c, v) = a.row(i);
            c.iter().zip(v).map(|(&j, &x)| (i, j, e[i] * x * e[j])).collect::<Vec<_>>()
        }).collect();
        let scaled = CsrMatrix::from_triplets(8, 8, &t).unwrap();
        let (s0, s1) = (soc_sa(&a).unwrap(), soc_sa(&scaled).unwrap());
        for (x, y) in s0.matrix.values().iter().zip(s1.matrix.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn aggregation_covers_exactly_the_free_nodes((a, aux) in grid_problem(), theta in 0.0f64..0.5, excl in proptest::collection::vec(proptest::bool::weighted(0.15), 36)) {
        let n = a.n_rows();
        let excluded = &excl[..n];
        let s = soc_material_dlap(&a, &aux).unwrap();
        let mask = drop_pointwise(&s, theta).unwrap();
        let agg = aggregate(&FilteredGraph::from_mask(&s, &mask).unwrap(), excluded).unwrap();
        let free = excluded.iter().filter(|&&x| !x).count();
        prop_assert_eq!(agg.sizes().iter().sum::<usize>(), free);
        for i in 0..n {
            prop_assert_eq!(agg.node_to_aggregate[i].is_none(), excluded[i]);
        }
        let p = tentative_prolongator(&agg, n).unwrap();
        let ptp = galerkin_product(&p, &CsrMatrix::identity(n)).unwrap();
        for i in 0..ptp.n_rows() {
            let (c, v) = ptp.row(i);
            for (&j, &x) in c.iter().zip(v) {
                prop_assert!(j == i || x == 0.0);
            }
        }
        let coarse = coarsen_auxiliary(&agg, &aux).unwrap();
        prop_assert_eq!(coarse.len(), agg.n_aggregates);
        prop_assert!(coarse.materials.iter().all(|m| m.is_spd()));
    }

    #[test]
    fn cg_converges_within_n_steps(n in 2usize..40, seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 + rng.gen_range(0.0..1.0)));
            if i + 1 < n {
                let w = rng.gen_range(0.1..1.0);
                t.push((i, i + 1, -w));
                t.push((i + 1, i, -w));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t).unwrap();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let opts = PcgOptions { rel_tol: 1e-10, max_iters: 2 * n, ..Default::default() };
        let (_, report) = cg(&a, &b, &opts).unwrap();
        prop_assert!(report.converged);
        prop_assert!(report.iterations <= n + 2);
        prop_assert!(report.residual_history.last().unwrap() <= &report.residual_history[0]);
    }
}

#[cfg(feature = "parallel")]
mod execution_paths {
    use super::*;
    use sa_amg::sparse::galerkin_product_with;
    use sa_amg::Execution;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn sequential_and_parallel_agree_bitwise((a, p) in square_and_p(), x in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let x = &x[..a.n_cols()];
            prop_assert_eq!(a.spmv_with(Execution::Sequential, x).unwrap(), a.spmv_with(Execution::Parallel, x).unwrap());
            prop_assert_eq!(
                galerkin_product_with(Execution::Sequential, &p, &a).unwrap(),
                galerkin_product_with(Execution::Parallel, &p, &a).unwrap()
            );
        }

        #[test]
        fn soc_paths_agree_bitwise((a, aux) in grid_problem()) {
            use sa_amg::soc::compute_soc_with;
            for kind in [SocKind::Sa, SocKind::Dlap, SocKind::MaterialDlap] {
                let s = compute_soc_with(Execution::Sequential, kind, &a, &aux).unwrap();
                let p = compute_soc_with(Execution::Parallel, kind, &a, &aux).unwrap();
                prop_assert_eq!(s.matrix, p.matrix);
            }
        }
    }
}
