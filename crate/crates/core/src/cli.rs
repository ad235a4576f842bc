//! Command-line front end.
//!
//! [`run`] parses arguments, writes the requested artifacts and returns the
//! process exit code: `0` on success, `2` on a usage error (including
//! out-of-range flags, rejected before any computation), `1` on a
//! computational error such as a band or window violation.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{integrate, Mode, DEFAULT_TOL, DEFAULT_VERLET_STEP, MAX_T_END};
use crate::elliptic::{jacobi, MAX_ARGUMENT};
use crate::error::Error;
use crate::focal::{asymptotic_grid, numeric_grid, renormalized_grid, FocalGrid};
use crate::output;
use crate::period::{period, period_expansion_check};
use crate::potentials::{Ell, PotentialSpec};
use crate::renorm::{convergence_experiment, uniform_grid, ConvergenceSetup, DEFAULT_WINDOW_K};

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "focal-renorm", version, about = "Renormalized trajectories and focal decompositions")]
pub struct RunConfig {
    /// Cap on worker threads for grid computations.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jacobi sn, cn, dn, sd at one point.
    Elliptic(EllipticArgs),
    /// Trajectory from the equilibrium.
    Trajectory(TrajectoryArgs),
    /// Period map samples.
    Period(PeriodArgs),
    /// Convergence of renormalized trajectories.
    Renorm(RenormArgs),
    /// Focal-decomposition index grid.
    Focal(FocalArgs),
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub u: f64,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Adaptive,
    Symplectic,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub v: f64,
    #[arg(long, value_parser = finite)]
    pub t_max: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
    pub mode: ModeArg,
    #[arg(long, value_parser = finite, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Fixed step of the symplectic scheme.
    #[arg(long, value_parser = finite, default_value_t = DEFAULT_VERLET_STEP)]
    pub step: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// `a:b:steps`, an inclusive uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        uniform_grid(self.a, self.b, self.steps)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected a:b:steps, got `{s}`"));
        }
        let a = finite(parts[0])?;
        let b = finite(parts[1])?;
        let steps: usize = parts[2].parse().map_err(|_| format!("bad step count `{}`", parts[2]))?;
        if steps == 0 {
            return Err("step count must be positive".into());
        }
        Ok(GridSpec { a, b, steps })
    }
}

/// `a:b`, an open interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band(pub f64, pub f64);

impl FromStr for Band {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
        let (a, b) = (finite(a)?, finite(b)?);
        if a >= b {
            return Err(format!("empty band `{s}`"));
        }
        Ok(Band(a, b))
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("velocities").required(true).args(["v", "v_grid"])))]
pub struct PeriodArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub v: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v_grid: Option<GridSpec>,
    /// Print the fitted `v²` coefficient of `T(v) - 2π`.
    #[arg(long)]
    pub fit: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenormArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, value_parser = finite)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1:21")]
    pub v_grid: GridSpec,
    #[arg(long, default_value_t = 64)]
    pub t_samples: usize,
    #[arg(long, value_parser = finite, default_value_t = DEFAULT_WINDOW_K)]
    pub window_k: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-cell table; defaults to `<out stem>_cells.csv`.
    #[arg(long)]
    pub cells: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FocalMode {
    Asymptotic,
    Numeric,
    Renormalized,
}

#[derive(Debug, Args)]
pub struct FocalArgs {
    #[arg(long, value_enum)]
    pub mode: FocalMode,
    #[arg(long, allow_hyphen_values = true, default_value = "+1")]
    pub ell: Ell,
    /// Required for the numeric and renormalized modes.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long, value_parser = finite)]
    pub t_max: f64,
    #[arg(long)]
    pub t_steps: usize,
    #[arg(long)]
    pub x_steps: usize,
    /// Half-width of the physical `x` range (numeric mode).
    #[arg(long, value_parser = finite, default_value_t = 3.0)]
    pub x_max: f64,
    /// Launch-velocity band `a:b` (numeric mode); defaults to 99.5% of the periodic band.
    #[arg(long, allow_hyphen_values = true)]
    pub v_band: Option<Band>,
    /// Shooting samples across the band (numeric mode).
    #[arg(long, default_value_t = 4000)]
    pub samples: usize,
    /// Renormalization level (renormalized mode).
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    /// Velocity samples on `[-1, 1]` (renormalized mode).
    #[arg(long, default_value_t = 2001)]
    pub resolution: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub image: Option<PathBuf>,
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a real number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("i/o: {e}"))
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn potential(desc: &str) -> Result<PotentialSpec, Failure> {
    PotentialSpec::parse(desc).map_err(|e| Failure::Usage(e.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(path)?))
}

fn elliptic(a: &EllipticArgs) -> Result<(), Failure> {
    if !(0.0..1.0).contains(&a.m) {
        return usage(format!("m = {} must lie in [0, 1)", a.m));
    }
    if a.u.abs() > MAX_ARGUMENT {
        return usage(format!("|u| = {} exceeds {MAX_ARGUMENT:e}", a.u.abs()));
    }
    let j = jacobi(a.u, a.m)?;
    let mut out = io::stdout().lock();
    writeln!(out, "u,m,sn,cn,dn,sd")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        output::real(a.u),
        output::real(a.m),
        output::real(j.sn),
        output::real(j.cn),
        output::real(j.dn),
        output::real(j.sd())
    )?;
    Ok(())
}

fn trajectory(a: &TrajectoryArgs) -> Result<(), Failure> {
    let p = potential(&a.potential)?;
    if !(0.0..=MAX_T_END).contains(&a.t_max) {
        return usage(format!("t-max = {} must lie in [0, {MAX_T_END:e}]", a.t_max));
    }
    if !(a.tol > 0.0) || !(a.step > 0.0) {
        return usage("tol and step must be positive");
    }
    p.check_band(a.v)?;
    let mode = match a.mode {
        ModeArg::Adaptive => Mode::Adaptive,
        ModeArg::Symplectic => Mode::Symplectic { step: a.step },
    };
    let sample = integrate(&p, a.v, a.t_max, mode, a.tol)?;
    let mut w = create(&a.out)?;
    output::write_trajectory(&mut w, &sample)?;
    w.flush()?;
    Ok(())
}

fn period_map(a: &PeriodArgs) -> Result<(), Failure> {
    let p = potential(&a.potential)?;
    let vs = match (a.v, a.v_grid) {
        (Some(v), _) => vec![v],
        (None, Some(g)) => g.points(),
        (None, None) => return usage("one of --v or --v-grid is required"),
    };
    if a.fit && vs.iter().any(|v| v.abs() > 0.2) {
        return usage("--fit needs every |v| <= 0.2");
    }
    let rows = vs
        .iter()
        .map(|&v| period(&p, v).map(|t| (v, t)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut w = create(&a.out)?;
    output::write_period_map(&mut w, &rows)?;
    w.flush()?;
    if a.fit {
        let c = period_expansion_check(&p, &vs)?;
        let expected = -0.75 * PI * p.ell.sign();
        println!(
            "fit: coefficient {} expected {} relative_error {}",
            output::real(c),
            output::real(expected),
            output::real((c - expected).abs() / expected.abs())
        );
    }
    Ok(())
}

fn cells_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}_cells.csv"))
}

fn renorm(a: &RenormArgs) -> Result<(), Failure> {
    let p = potential(&a.potential)?;
    if !(a.eps > 0.0 && a.eps < 1.0 / 3.0) {
        return usage(format!("eps = {} must lie in (0, 1/3)", a.eps));
    }
    if a.n.is_empty() || a.n[0] == 0 || a.n.windows(2).any(|w| w[0] >= w[1]) {
        return usage("--n must be a strictly increasing list of positive integers");
    }
    if a.t_samples < 2 {
        return usage("--t-samples must be at least 2");
    }
    if !(a.window_k > 0.0) {
        return usage("--window-k must be positive");
    }
    let setup = ConvergenceSetup {
        eps: a.eps,
        n_list: a.n.clone(),
        v_grid: a.v_grid.points(),
        t_samples: a.t_samples,
        window_k: a.window_k,
    };
    let (rows, cells) = convergence_experiment(&p, &setup)?;
    let mut w = create(&a.out)?;
    output::write_convergence(&mut w, &rows)?;
    w.flush()?;
    let mut w = create(&a.cells.clone().unwrap_or_else(|| cells_path(&a.out)))?;
    output::write_convergence_cells(&mut w, &cells)?;
    w.flush()?;
    Ok(())
}

/// Times `t_max·(i + 1)/steps`, excluding `t = 0`.
fn positive_times(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|i| t_max * (i + 1) as f64 / steps as f64).collect()
}

/// Cell centres of `steps` equal parts of `(-half, half)`.
fn centred(half: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|j| -half + 2.0 * half * (j as f64 + 0.5) / steps as f64).collect()
}

fn focal(a: &FocalArgs) -> Result<(), Failure> {
    if a.t_steps < 2 || a.x_steps < 2 {
        return usage("--t-steps and --x-steps must be at least 2");
    }
    if !(a.t_max > 0.0) {
        return usage("--t-max must be positive");
    }
    let grid: FocalGrid = match a.mode {
        FocalMode::Asymptotic => asymptotic_grid(a.ell, (0.0, a.t_max), (-1.0, 1.0), a.t_steps, a.x_steps)?,
        FocalMode::Numeric => {
            let desc = a.potential.as_deref().ok_or(Failure::Usage("numeric mode needs --potential".into()))?;
            let p = potential(desc)?;
            if !(a.x_max > 0.0) || a.samples < 2 {
                return usage("--x-max must be positive and --samples at least 2");
            }
            let vm = p.v_max_physical();
            let Band(lo, hi) = a.v_band.unwrap_or(if vm.is_finite() {
                Band(-0.995 * vm, 0.995 * vm)
            } else {
                Band(-2.0, 2.0)
            });
            numeric_grid(&p, positive_times(a.t_max, a.t_steps), centred(a.x_max, a.x_steps), (lo, hi), a.samples)?
        }
        FocalMode::Renormalized => {
            let desc = a.potential.as_deref().ok_or(Failure::Usage("renormalized mode needs --potential".into()))?;
            let p = potential(desc)?;
            if a.n == 0 || a.resolution < 2 {
                return usage("--n must be positive and --resolution at least 2");
            }
            renormalized_grid(
                &p,
                a.n,
                uniform_grid(0.0, a.t_max, a.t_steps),
                uniform_grid(-1.0, 1.0, a.x_steps),
                a.resolution,
            )?
        }
    };
    let mut w = create(&a.out)?;
    output::write_focal_csv(&mut w, &grid)?;
    w.flush()?;
    if let Some(path) = &a.image {
        let mut w = create(path)?;
        output::write_focal_pgm(&mut w, &grid)?;
        w.flush()?;
    }
    Ok(())
}

fn dispatch(cfg: &RunConfig) -> Result<(), Failure> {
    match &cfg.command {
        Command::Elliptic(a) => elliptic(a),
        Command::Trajectory(a) => trajectory(a),
        Command::Period(a) => period_map(a),
        Command::Renorm(a) => renorm(a),
        Command::Focal(a) => focal(a),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cfg.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cfg)),
            Err(e) => Err(Failure::Compute(format!("thread pool: {e}"))),
        },
        None => dispatch(&cfg),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
