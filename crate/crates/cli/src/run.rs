//! One solve: problem, hierarchy, PCG, and the resulting record.

use std::time::Instant;

use sa_amg::hierarchy::{build_hierarchy_with, HierarchySummary, Termination};
use sa_amg::solvers::{pcg, AmgPreconditioner, SolveReport};
use sa_amg::Execution;
use serde::Serialize;

use crate::settings::{ProblemKind, RunSpec};

/// One row of a sweep table. `cost` is present only for converged runs.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepRecord {
    pub problem: &'static str,
    pub n: Option<usize>,
    pub nr: Option<usize>,
    pub nt: Option<usize>,
    pub nz: Option<usize>,
    pub kappa: f64,
    pub soc: &'static str,
    pub drop: &'static str,
    pub theta: f64,
    pub max_coarse: usize,
    pub levels: Option<usize>,
    pub operator_complexity: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: bool,
    pub cost: Option<f64>,
    pub status: String,
    pub setup_seconds: Option<f64>,
    pub solve_seconds: Option<f64>,
}

/// Column order of the sweep CSV.
pub const CSV_HEADER: &str = "problem,n,nr,nt,nz,kappa,soc,drop,theta,max_coarse,levels,operator_complexity,\
iterations,converged,cost,status,setup_seconds,solve_seconds";

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub record: SweepRecord,
    pub hierarchy: Option<HierarchySummary>,
    pub solve: Option<SolveReport>,
}

impl SweepRecord {
    fn new(spec: &RunSpec) -> Self {
        let p = &spec.problem;
        let ring = p.kind == ProblemKind::Annulus;
        SweepRecord {
            problem: p.kind.as_str(),
            n: (!ring).then_some(p.n),
            nr: ring.then_some(p.nr),
            nt: ring.then_some(p.nt),
            nz: ring.then_some(p.nz),
            kappa: p.kappa,
            soc: spec.amg.soc_kind.as_str(),
            drop: spec.amg.drop_kind.as_str(),
            theta: spec.amg.theta,
            max_coarse: spec.amg.max_coarse_size,
            levels: None,
            operator_complexity: None,
            iterations: None,
            converged: false,
            cost: None,
            status: String::new(),
            setup_seconds: None,
            solve_seconds: None,
        }
    }

    pub fn without_timings(mut self) -> Self {
        self.setup_seconds = None;
        self.solve_seconds = None;
        self
    }
}

fn termination_label(t: Termination) -> String {
    match t {
        Termination::CoarseSizeReached => "ok".into(),
        Termination::MaxLevels => "max_levels".into(),
        Termination::Stagnated { level } => format!("stagnated_at_level_{level}"),
    }
}

/// Runs one configuration. Every failure after argument parsing is
/// reported in the record rather than as an error.
pub fn run(spec: &RunSpec, exec: Execution) -> Outcome {
    let mut record = SweepRecord::new(spec);
    let problem = match spec.problem.build() {
        Ok(p) => p,
        Err(e) => {
            record.status = format!("problem_error: {e}");
            return Outcome { record, hierarchy: None, solve: None };
        }
    };
    let t0 = Instant::now();
    let h = match build_hierarchy_with(exec, &problem, &spec.amg) {
        Ok(h) => h,
        Err(e) => {
            record.status = format!("setup_error: {e}");
            return Outcome { record, hierarchy: None, solve: None };
        }
    };
    record.setup_seconds = Some(t0.elapsed().as_secs_f64());
    let summary = h.summary();
    record.levels = Some(h.n_levels());
    record.operator_complexity = Some(summary.operator_complexity);
    record.status = termination_label(h.termination);
    if !h.reached_coarse_size() {
        return Outcome { record, hierarchy: Some(summary), solve: None };
    }

    let m = AmgPreconditioner::new(&h);
    let t1 = Instant::now();
    let result = pcg(&problem.matrix, &problem.rhs, |r| m.apply(r), &spec.pcg);
    record.solve_seconds = Some(t1.elapsed().as_secs_f64());
    match result {
        Ok((_, report)) => {
            record.iterations = Some(report.iterations);
            record.converged = report.converged;
            if report.converged {
                record.cost = Some(report.iterations as f64 * summary.operator_complexity);
            } else {
                record.status = "max_iterations".into();
            }
            Outcome { record, hierarchy: Some(summary), solve: Some(report) }
        }
        Err(e) => {
            record.status = format!("solve_error: {e}");
            Outcome { record, hierarchy: Some(summary), solve: None }
        }
    }
}
