//! Command implementations behind the `sa-amg` binary: single solves,
//! parameter sweeps, artifact export and the Jacobi error demo.

pub mod commands;
pub mod error;
pub mod run;
pub mod settings;

pub use error::{exit, CliError, Result};
pub use run::{run, Outcome, SweepRecord, CSV_HEADER};
pub use settings::{ProblemKind, ProblemSpec, RunSpec, Settings};
