use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use sa_amg::demo::jacobi_error_demo;
use sa_amg::fem::{write_coords_csv, write_dirichlet_csv, write_materials_csv};
use sa_amg::hierarchy::{build_hierarchy_with, strength_and_mask};
use sa_amg::sparse::write_matrix_market;
use sa_amg::Execution;
use serde::Serialize;

use crate::error::{exit, CliError, Result};
use crate::run::{run, SweepRecord};
use crate::settings::Settings;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Runs one solve and writes its JSON record. Returns the exit code.
pub fn solve(settings: &Settings, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let spec = settings.run_spec()?;
    let outcome = run(&spec, Execution::default());
    if outcome.record.status.starts_with("problem_error") {
        return Err(CliError::usage(outcome.record.status));
    }
    let json = serde_json::to_string_pretty(&outcome)?;
    writeln!(stdout, "{json}")?;
    if let Some(path) = out {
        let mut f = create(path)?;
        writeln!(f, "{json}")?;
        f.flush()?;
    }
    Ok(if outcome.record.converged { exit::OK } else { exit::NOT_CONVERGED })
}

/// Runs every grid point and writes one CSV row each, in grid order.
pub fn sweep(settings: &Settings, timings: bool, w: &mut dyn Write) -> Result<Vec<SweepRecord>> {
    let grid = settings.grid()?;
    // grid points run concurrently; each solve stays on one thread
    let records: Vec<SweepRecord> = Execution::default().map_slice(&grid, |spec| {
        let r = run(spec, Execution::Sequential).record;
        if timings {
            r
        } else {
            r.without_timings()
        }
    });
    let mut csv = csv::Writer::from_writer(w);
    for r in &records {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Matrix,
    Graph,
    Aggregates,
    Soc,
    Problem,
}

impl std::str::FromStr for ExportKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "matrix" => Ok(ExportKind::Matrix),
            "graph" => Ok(ExportKind::Graph),
            "aggregates" => Ok(ExportKind::Aggregates),
            "soc" => Ok(ExportKind::Soc),
            "problem" => Ok(ExportKind::Problem),
            other => Err(format!("unknown export `{other}` (matrix, graph, aggregates, soc, problem)")),
        }
    }
}

/// Writes one artifact of level `level` (0 is the fine level) to `out`.
/// `problem` writes `coords.csv`, `materials.csv`, `dirichlet.csv` and
/// `matrix.mtx` into the directory `out`.
pub fn export(settings: &Settings, what: ExportKind, level: usize, out: &Path) -> Result<()> {
    let spec = settings.run_spec()?;
    let problem = spec.problem.build()?;
    if what == ExportKind::Problem {
        std::fs::create_dir_all(out)?;
        write_coords_csv(&problem.coords, create(&out.join("coords.csv"))?)?;
        write_materials_csv(&problem.node_materials, create(&out.join("materials.csv"))?)?;
        write_dirichlet_csv(&problem.dirichlet, create(&out.join("dirichlet.csv"))?)?;
        write_matrix_market(&problem.matrix, create(&out.join("matrix.mtx"))?)?;
        return Ok(());
    }
    let exec = Execution::default();
    let h = build_hierarchy_with(exec, &problem, &spec.amg)?;
    let lv = h
        .levels
        .get(level)
        .ok_or_else(|| CliError::usage(format!("level {level} does not exist; the hierarchy has {}", h.n_levels())))?;
    let mut f = create(out)?;
    match what {
        ExportKind::Matrix => write_matrix_market(&lv.a, &mut f)?,
        ExportKind::Graph => strength_and_mask(exec, &lv.a, &lv.aux, &spec.amg)?.1.write_edges_csv(level, &mut f)?,
        ExportKind::Soc => strength_and_mask(exec, &lv.a, &lv.aux, &spec.amg)?.0.write_csv(&mut f)?,
        ExportKind::Aggregates => lv
            .aggregation
            .as_ref()
            .ok_or_else(|| CliError::usage(format!("level {level} is the coarsest level and has no aggregates")))?
            .write_csv(level, &lv.aux.coords, &mut f)?,
        ExportKind::Problem => unreachable!("handled above"),
    }
    f.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct DemoMetadata {
    pub problem: &'static str,
    pub n: usize,
    pub kappa: f64,
    pub sweeps: usize,
    pub seed: u64,
    pub omega: f64,
}

/// Writes the smoothed error field as CSV and returns its metadata.
pub fn error_demo(settings: &Settings, w: &mut dyn Write) -> Result<DemoMetadata> {
    let spec = settings.run_spec()?;
    let (sweeps, seed) = (settings.sweeps()?, settings.seed()?);
    let problem = spec.problem.build()?;
    let field = jacobi_error_demo(&problem, sweeps, seed);
    field.write_csv(&mut *w)?;
    Ok(DemoMetadata {
        problem: spec.problem.kind.as_str(),
        n: spec.problem.n,
        kappa: spec.problem.kappa,
        sweeps,
        seed,
        omega: sa_amg::demo::DEMO_OMEGA,
    })
}
