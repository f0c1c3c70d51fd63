use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sa_amg_cli::commands::{self, ExportKind};
use sa_amg_cli::{exit, CliError, Result, Settings};

#[derive(Parser)]
#[command(name = "sa-amg", version, about = "Smoothed aggregation AMG benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and print a JSON record.
    Solve {
        #[command(flatten)]
        run: RunFlags,
        /// Also write the JSON record to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter grid and write one CSV row per combination.
    Sweep {
        #[command(flatten)]
        run: RunFlags,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave the timing columns empty so identical runs give identical files.
        #[arg(long)]
        no_timings: bool,
    },
    /// Export an operator, filtered graph, aggregates, strength matrix or the problem.
    Export {
        #[command(flatten)]
        run: RunFlags,
        #[arg(long)]
        what: ExportKind,
        /// Hierarchy level, 0 being the fine level.
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Damped Jacobi sweeps on a seeded random error; CSV of the error field.
    ErrorDemo {
        #[command(flatten)]
        run: RunFlags,
        #[arg(long)]
        sweeps: Option<String>,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Problem and solver settings. Sweep accepts comma lists for
/// --n, --kappa, --soc, --drop and --theta.
#[derive(Args)]
struct RunFlags {
    /// key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// two-domain, annulus or layered.
    #[arg(long)]
    problem: Option<String>,
    /// Elements per direction (two-domain) or along x (layered).
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    nr: Option<String>,
    #[arg(long)]
    nt: Option<String>,
    #[arg(long)]
    nz: Option<String>,
    #[arg(long)]
    layers: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    /// sa, dlap or material.
    #[arg(long)]
    soc: Option<String>,
    /// pointwise or cutdrop.
    #[arg(long)]
    drop: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    rel_tol: Option<String>,
    #[arg(long)]
    abs_tol: Option<String>,
    #[arg(long)]
    max_iters: Option<String>,
    /// Default 50 for planar problems, 1000 for the annulus.
    #[arg(long)]
    max_coarse: Option<String>,
    #[arg(long)]
    max_levels: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl RunFlags {
    fn settings(&self, extra: &[(&str, &Option<String>)]) -> Result<Settings> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let own = [
            ("problem", &self.problem),
            ("n", &self.n),
            ("nr", &self.nr),
            ("nt", &self.nt),
            ("nz", &self.nz),
            ("layers", &self.layers),
            ("kappa", &self.kappa),
            ("soc", &self.soc),
            ("drop", &self.drop),
            ("theta", &self.theta),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
            ("max_iters", &self.max_iters),
            ("max_coarse", &self.max_coarse),
            ("max_levels", &self.max_levels),
            ("seed", &self.seed),
        ];
        for (key, value) in own.iter().chain(extra) {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        s.overlay(&flags);
        Ok(s)
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve { run, out: path } => commands::solve(&run.settings(&[])?, path.as_deref(), &mut out),
        Command::Sweep { run, out: path, no_timings } => {
            let settings = run.settings(&[])?;
            match path {
                Some(p) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
                    commands::sweep(&settings, !no_timings, &mut f)?;
                    f.flush()?;
                }
                None => {
                    commands::sweep(&settings, !no_timings, &mut out)?;
                }
            }
            Ok(exit::OK)
        }
        Command::Export { run, what, level, out: path } => {
            commands::export(&run.settings(&[])?, what, level, &path)?;
            Ok(exit::OK)
        }
        Command::ErrorDemo { run, sweeps, out: path } => {
            let settings = run.settings(&[("sweeps", &sweeps)])?;
            let meta = match path {
                Some(p) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
                    let meta = commands::error_demo(&settings, &mut f)?;
                    f.flush()?;
                    writeln!(out, "{}", serde_json::to_string(&meta)?)?;
                    meta
                }
                None => commands::error_demo(&settings, &mut out)?,
            };
            eprintln!("{}", serde_json::to_string(&meta)?);
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::FAILURE as u8 } else { exit::OK as u8 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) | CliError::Config { .. } = e {
                eprintln!("run `sa-amg --help` for usage");
            }
            ExitCode::from(exit::FAILURE as u8)
        }
    }
}
