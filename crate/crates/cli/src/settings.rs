//! Flat `key=value` run settings, shared by config files and flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use sa_amg::fem::{annulus_problem, layered_stack_problem, two_domain_problem, AssembledProblem};
use sa_amg::filter::DropKind;
use sa_amg::hierarchy::{AmgConfig, ANNULUS_MAX_COARSE, PLANAR_MAX_COARSE};
use sa_amg::soc::SocKind;
use sa_amg::solvers::PcgOptions;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Every accepted key. Flags use the same names with `-` for `_`.
pub const KEYS: &[&str] = &[
    "problem", "n", "nr", "nt", "nz", "layers", "kappa", "soc", "drop", "theta", "rel_tol", "abs_tol",
    "max_iters", "max_coarse", "max_levels", "seed", "sweeps",
];

/// Keys that may hold comma-separated lists in a sweep.
pub const GRID_KEYS: &[&str] = &["n", "kappa", "soc", "drop", "theta"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config { line: idx + 1, msg: format!("expected key=value, got `{line}`") })?;
            s.set(k, v).map_err(|e| CliError::Config { line: idx + 1, msg: e.to_string() })?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = normalize(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!("unknown setting `{key}`")));
        }
        self.values.insert(key, value.trim().to_string());
        Ok(())
    }

    /// Values in `other` take precedence.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn list<T: FromStr>(&self, key: &str, default: T) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(vec![default]),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse::<T>().map_err(|e| CliError::usage(format!("bad value `{item}` for {key}: {e}")))
                })
                .collect(),
        }
    }

    fn single<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let mut v = self.list(key, default)?;
        if v.len() != 1 {
            return Err(CliError::usage(format!("{key} takes a single value here")));
        }
        Ok(v.remove(0))
    }

    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|raw| raw.parse::<T>().map_err(|e| CliError::usage(format!("bad value `{raw}` for {key}: {e}"))))
            .transpose()
    }

    pub fn seed(&self) -> Result<u64> {
        self.single("seed", 0)
    }

    pub fn sweeps(&self) -> Result<usize> {
        self.single("sweeps", 10)
    }

    /// A single run; grid keys must hold one value.
    pub fn run_spec(&self) -> Result<RunSpec> {
        let mut grid = self.grid()?;
        if grid.len() != 1 {
            return Err(CliError::usage("list values are only accepted by `sweep`"));
        }
        Ok(grid.remove(0))
    }

    /// Cartesian product over the grid keys, ordered n, kappa, soc, drop,
    /// theta with theta varying fastest.
    pub fn grid(&self) -> Result<Vec<RunSpec>> {
        let kind: ProblemKind = self.single("problem", ProblemKind::TwoDomain)?;
        let ns: Vec<usize> = self.list("n", 32)?;
        let kappas: Vec<f64> = self.list("kappa", 1.0)?;
        let socs: Vec<SocKind> = self.list("soc", SocKind::MaterialDlap)?;
        let drops: Vec<DropKind> = self.list("drop", DropKind::Pointwise)?;
        let thetas: Vec<f64> = self.list("theta", 0.08)?;
        let (nr, nt, nz) = (self.single("nr", 20)?, self.single("nt", 150)?, self.single("nz", 1)?);
        let layers = self.single("layers", 6)?;
        let max_coarse: Option<usize> = self.optional("max_coarse")?;
        let max_levels = self.single("max_levels", 10)?;
        let pcg = PcgOptions {
            rel_tol: self.single("rel_tol", 1e-8)?,
            abs_tol: self.optional("abs_tol")?,
            max_iters: self.single("max_iters", 1000)?,
        };
        for &t in &thetas {
            if !(0.0..=1.0).contains(&t) {
                return Err(CliError::usage(format!("theta {t} is outside [0, 1]")));
            }
        }
        let ns = if kind == ProblemKind::Annulus { vec![ns[0]] } else { ns };

        let mut out = Vec::new();
        for &n in &ns {
            for &kappa in &kappas {
                for &soc_kind in &socs {
                    for &drop_kind in &drops {
                        for &theta in &thetas {
                            let problem = ProblemSpec { kind, n, nr, nt, nz, layers, kappa };
                            let amg = AmgConfig {
                                soc_kind,
                                drop_kind,
                                theta,
                                max_levels,
                                max_coarse_size: max_coarse.unwrap_or(problem.default_max_coarse()),
                                ..Default::default()
                            };
                            out.push(RunSpec { problem, amg, pcg });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    TwoDomain,
    Annulus,
    Layered,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::TwoDomain => "two-domain",
            ProblemKind::Annulus => "annulus",
            ProblemKind::Layered => "layered",
        }
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "two-domain" | "two_domain" => Ok(ProblemKind::TwoDomain),
            "annulus" => Ok(ProblemKind::Annulus),
            "layered" | "layered-stack" => Ok(ProblemKind::Layered),
            other => Err(format!("unknown problem `{other}` (two-domain, annulus, layered)")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// Elements per direction (two-domain) or along x (layered).
    pub n: usize,
    pub nr: usize,
    pub nt: usize,
    pub nz: usize,
    pub layers: usize,
    pub kappa: f64,
}

impl ProblemSpec {
    pub fn default_max_coarse(&self) -> usize {
        match self.kind {
            ProblemKind::Annulus => ANNULUS_MAX_COARSE,
            _ => PLANAR_MAX_COARSE,
        }
    }

    pub fn build(&self) -> sa_amg::Result<AssembledProblem> {
        match self.kind {
            ProblemKind::TwoDomain => two_domain_problem(self.n, self.kappa),
            ProblemKind::Annulus => annulus_problem(self.nr, self.nt, self.nz, self.kappa),
            ProblemKind::Layered => {
                let per_layer = (self.n / self.layers.max(1)).max(1);
                layered_stack_problem(self.layers, self.n, per_layer, &[1.0, self.kappa])
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub problem: ProblemSpec,
    pub amg: AmgConfig,
    pub pcg: PcgOptions,
}
