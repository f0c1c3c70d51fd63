use std::path::Path;
use std::process::{Command, Output};

use sa_amg::fem::two_domain_problem;
use sa_amg::hierarchy::{build_hierarchy, AmgConfig};
use sa_amg::sparse::read_matrix_market;
use sa_amg_cli::CSV_HEADER;

fn sa_amg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sa-amg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path).unwrap().lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn sweep_header_is_pinned() {
    let golden = "problem,n,nr,nt,nz,kappa,soc,drop,theta,max_coarse,levels,operator_complexity,\
iterations,converged,cost,status,setup_seconds,solve_seconds";
    assert_eq!(CSV_HEADER, golden);
    let o = sa_amg(&["sweep", "--n", "8", "--theta", "0.08"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(golden));
    assert_eq!(lines.count(), 1);
}

#[test]
fn sweep_grid_is_ordered_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.cfg");
    std::fs::write(
        &cfg,
        "# theta grid\nproblem = two-domain\nn = 8\ntheta = 0.0,0.0025,0.005,0.01,0.02,0.04,0.08,0.16,0.32,0.64\n\
         kappa = 1,100,10000\nsoc = sa,material\n",
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = sa_amg(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--no-timings"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let rows = rows(&a);
    assert_eq!(rows.len(), 60);
    assert_eq!((rows[0][8].as_str(), rows[1][8].as_str()), ("0.0", "0.0025"));
    assert_eq!(rows[10][6], "material");
    assert_eq!(rows[20][5], "100.0");
    for r in &rows {
        let (converged, cost) = (&r[13], &r[14]);
        if converged == "true" {
            let it: f64 = r[12].parse().unwrap();
            let cx: f64 = r[11].parse().unwrap();
            assert_eq!(cost.parse::<f64>().unwrap(), it * cx);
        } else {
            assert!(cost.is_empty());
        }
        assert!(r[16].is_empty() && r[17].is_empty());
    }
}

#[test]
fn stagnated_rows_are_failures_not_errors() {
    let o = sa_amg(&["sweep", "--n", "8", "--soc", "sa", "--theta", "1.0,0.08"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert!(lines[0].contains(",false,,stagnated_at_level_0,"), "{}", lines[0]);
    assert!(lines[1].contains(",true,"));
}

#[test]
fn solve_reports_json_and_exit_codes() {
    let o = sa_amg(&["solve", "--problem", "two-domain", "--n", "32", "--kappa", "1", "--soc", "sa", "--theta", "0.0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["record"]["converged"], true);
    assert_eq!(v["record"]["status"], "ok");
    assert!(v["hierarchy"]["levels"].as_array().unwrap().len() >= 2);

    let o = sa_amg(&["solve", "--n", "32", "--kappa", "1e4", "--max-iters", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["record"]["converged"], false);

    let o = sa_amg(&["solve", "--n", "8", "--soc", "sa", "--theta", "1"]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(sa_amg(&["solve", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(sa_amg(&["solve", "--soc", "magic"]).status.code(), Some(1));
    assert_eq!(sa_amg(&["solve", "--theta", "0.1,0.2"]).status.code(), Some(1));
    assert_eq!(sa_amg(&["solve", "--kappa", "0.5"]).status.code(), Some(1));
}

#[test]
fn annulus_defaults_give_three_levels() {
    let o = sa_amg(&["solve", "--problem", "annulus", "--kappa", "1e4", "--soc", "material", "--theta", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["record"]["levels"], 3);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "theta=0.5\nkappa=100\nn=8\n").unwrap();
    let o = sa_amg(&["solve", "--config", cfg.to_str().unwrap(), "--theta", "0.08"]);
    let v = json(&o);
    assert_eq!(v["record"]["theta"], 0.08);
    assert_eq!(v["record"]["kappa"], 100.0);
}

#[test]
fn exported_aggregates_respect_the_interface() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("agg.csv");
    let o = sa_amg(&[
        "export", "--what", "aggregates", "--n", "32", "--kappa", "1e4", "--theta", "0.08", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("level,node_id,x,y,z,aggregate_id\n"));
    let mut side: std::collections::HashMap<i64, bool> = Default::default();
    for r in rows(&out) {
        let (x, id): (f64, i64) = (r[2].parse().unwrap(), r[5].parse().unwrap());
        if id >= 0 {
            assert_eq!(*side.entry(id).or_insert(x < 0.0), x < 0.0, "aggregate {id} spans x = 0");
        }
    }
}

#[test]
fn exported_graph_without_dropping_has_every_edge() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, matrix) = (dir.path().join("g.csv"), dir.path().join("a.mtx"));
    let base = ["--n", "16", "--kappa", "1", "--theta", "0"];
    let o = sa_amg(&[&["export", "--what", "graph", "--out", graph.to_str().unwrap()][..], &base].concat());
    assert!(o.status.success());
    let o = sa_amg(&[&["export", "--what", "matrix", "--out", matrix.to_str().unwrap()][..], &base].concat());
    assert!(o.status.success());
    let a = read_matrix_market(std::io::BufReader::new(std::fs::File::open(&matrix).unwrap())).unwrap();
    assert_eq!(rows(&graph).len(), a.nnz() - a.n_rows());
}

#[test]
fn exported_coarse_matrix_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a1.mtx");
    let o = sa_amg(&["export", "--what", "matrix", "--level", "1", "--n", "16", "--kappa", "100", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let read = read_matrix_market(std::io::BufReader::new(std::fs::File::open(&out).unwrap())).unwrap();
    let p = two_domain_problem(16, 100.0).unwrap();
    let h = build_hierarchy(&p, &AmgConfig { max_coarse_size: 50, ..Default::default() }).unwrap();
    assert_eq!(read, h.levels[1].a);

    let o = sa_amg(&["export", "--what", "matrix", "--level", "9", "--n", "16", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exported_problem_and_soc_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = sa_amg(&["export", "--what", "problem", "--n", "4", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    for f in ["coords.csv", "materials.csv", "dirichlet.csv", "matrix.mtx"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let coords = std::fs::read_to_string(dir.path().join("coords.csv")).unwrap();
    assert_eq!(coords.lines().count(), 26);
    let soc = dir.path().join("soc.csv");
    let o = sa_amg(&["export", "--what", "soc", "--n", "4", "--out", soc.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&soc).unwrap().starts_with("row,col,value\n"));
}

#[test]
fn error_demo_is_seeded() {
    let run = |sweeps: &str, seed: &str| {
        let o = sa_amg(&["error-demo", "--n", "16", "--kappa", "1e4", "--sweeps", sweeps, "--seed", seed]);
        assert!(o.status.success());
        let meta: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(meta["seed"].as_u64().unwrap().to_string(), seed);
        stdout(&o)
    };
    let a = run("10", "3");
    assert!(a.starts_with("node,x,y,error\n"));
    assert_eq!(a, run("10", "3"));
    assert_ne!(a, run("10", "4"));

    let p = two_domain_problem(16, 1e4).unwrap();
    let initial = sa_amg::demo::random_error(&p, 3);
    let zero = run("0", "3");
    for (line, e) in zero.lines().skip(1).zip(&initial) {
        assert_eq!(line.rsplit(',').next().unwrap().parse::<f64>().unwrap(), *e);
    }
}
