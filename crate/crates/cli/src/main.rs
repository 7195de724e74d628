//! `robin`: parameter sweeps over Robin Laplacian spectra.

mod commands;
mod config;
mod figures;
mod grid;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigFile, GridText};
use grid::Grid;

#[derive(Debug, Parser)]
#[command(name = "robin", version, about = "Sweeps over Robin Laplacian eigenvalues, Riesz means and thresholds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of the Robin Laplacian on an interval.
    Eig,
    /// Riesz means on a cuboid against the two-term Weyl prediction.
    Riesz,
    /// The constants L^sc_{γ,d} and L_{γ,d}(β) in both representations.
    Constants,
    /// The sign change β_W(γ,d) of L_{γ,d}.
    Betaw,
    /// Per-band thresholds β^(k)(γ).
    Betak,
    /// Normalised Berezin deficit of the coupled interval problem.
    Deficit,
    /// Oscillating part of the coupled interval Riesz mean.
    Oscillation,
    /// Lower bound for the excess ratio r_{γ,1}(β) up to λ_max.
    Rexcess,
    /// Maximise the Riesz mean over unit-volume cuboids.
    Optimize,
    /// Maximisers along a λ grid with coupled β, and a shape verdict.
    Trajectory,
    /// Write the datasets behind the three standard figures.
    Figures {
        #[arg(value_enum, default_value_t = figures::Which::All)]
        which: figures::Which,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Selftest {
        /// Only these criteria (comma-separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Riesz order grid.
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// Robin parameter grid (`inf` for Dirichlet, `0` for Neumann).
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Spectral parameter grid.
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Spectral parameters 10^e for e on `lo:hi:n`.
    #[arg(long, global = true, value_name = "LO:HI:N")]
    lambda_log: Option<String>,
    /// Spectral parameters s² for s on a grid, giving grids uniform in √λ.
    #[arg(long, global = true)]
    sqrt_lambda: Option<String>,
    /// Dimension grid.
    #[arg(long, global = true)]
    d: Option<String>,
    /// Eigenvalue or band index grid.
    #[arg(long, global = true)]
    k: Option<String>,
    /// Side lengths of the cuboid (or the interval length for `eig`).
    #[arg(long, global = true)]
    sides: Option<String>,
    /// Read β as relative: the operator uses β√λ.
    #[arg(long, global = true)]
    coupled: bool,
    /// Output file (a directory for `figures`); standard output otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Relative tolerance of the eigenvalue solver.
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    /// Bracket width for β_W and β^(k).
    #[arg(long, global = true)]
    tol_beta: Option<f64>,
    /// Final log-side window of the shape optimiser.
    #[arg(long, global = true)]
    tol_shape: Option<f64>,
    /// Aspect ratio below which a trajectory counts as converging to the cube.
    #[arg(long, global = true)]
    tol_aspect: Option<f64>,
    /// Lattice-point budget for cuboid Riesz means.
    #[arg(long, global = true)]
    max_terms: Option<f64>,
    /// Configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Tolerance overrides; `None` keeps the library default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tolerances {
    pub root: Option<f64>,
    pub beta: Option<f64>,
    pub shape: Option<f64>,
    pub aspect: Option<f64>,
    pub max_terms: Option<f64>,
}

/// Flags merged over the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub gamma: Option<Grid>,
    pub beta: Option<Grid>,
    pub lambda: Option<Grid>,
    pub d: Option<Grid>,
    pub k: Option<Grid>,
    pub sides: Option<Grid>,
    pub coupled: bool,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub tol: Tolerances,
}

/// A problem with the request itself, reported with exit code 1.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn grid_from(flag: &str, text: &str, parse: fn(&str) -> Result<Grid, grid::GridError>) -> Result<Grid, UsageError> {
    parse(text).map_err(|e| UsageError(format!("{flag}: {e}")))
}

fn pick(flag: Option<&String>, file: Option<&GridText>, name: &str) -> Result<Option<Grid>, UsageError> {
    match (flag, file) {
        (Some(t), _) => grid_from(&format!("--{}", name.replace('_', "-")), t, Grid::parse).map(Some),
        (None, Some(t)) => grid_from(&format!("grid.{name} in the config file"), &t.as_text(), Grid::parse).map(Some),
        (None, None) => Ok(None),
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, UsageError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(UsageError(format!("{name} must be positive, got {x}"))),
        _ => Ok(v),
    }
}

impl Settings {
    fn resolve(a: &CommonArgs) -> Result<Settings, UsageError> {
        let file = match &a.config {
            Some(p) => ConfigFile::load(p).map_err(UsageError)?,
            None => ConfigFile::default(),
        };
        let g = &file.grid;

        let flag_lambdas = [
            a.lambda.as_ref().map(|t| grid_from("--lambda", t, Grid::parse)),
            a.lambda_log.as_ref().map(|t| grid_from("--lambda-log", t, Grid::parse_log_exponents)),
            a.sqrt_lambda.as_ref().map(|t| grid_from("--sqrt-lambda", t, Grid::parse_squared)),
        ];
        let file_lambdas = [
            g.lambda.as_ref().map(|t| grid_from("grid.lambda", &t.as_text(), Grid::parse)),
            g.lambda_log.as_ref().map(|t| grid_from("grid.lambda_log", &t.as_text(), Grid::parse_log_exponents)),
            g.sqrt_lambda.as_ref().map(|t| grid_from("grid.sqrt_lambda", &t.as_text(), Grid::parse_squared)),
        ];
        let one_lambda = |set: [Option<Result<Grid, UsageError>>; 3], what: &str| -> Result<Option<Grid>, UsageError> {
            let given: Vec<_> = set.into_iter().flatten().collect();
            if given.len() > 1 {
                return Err(UsageError(format!("give at most one of lambda, lambda_log, sqrt_lambda {what}")));
            }
            given.into_iter().next().transpose()
        };
        let lambda = match one_lambda(flag_lambdas, "on the command line")? {
            Some(l) => Some(l),
            None => one_lambda(file_lambdas, "in the config file")?,
        };

        let format = match (a.format, &file.run.format) {
            (Some(f), _) => Some(f),
            (None, Some(s)) => Some(
                Format::from_str(s, true).map_err(|_| UsageError(format!("run.format: unknown format `{s}`")))?,
            ),
            (None, None) => None,
        };
        let jobs = a.jobs.or(file.run.jobs);
        if jobs == Some(0) {
            return Err(UsageError("--jobs must be at least 1".into()));
        }
        let t = &file.tolerances;
        let tol = Tolerances {
            root: positive("--tol-root", a.tol_root.or(t.root))?,
            beta: positive("--tol-beta", a.tol_beta.or(t.beta))?,
            shape: positive("--tol-shape", a.tol_shape.or(t.shape))?,
            aspect: positive("--tol-aspect", a.tol_aspect.or(t.aspect))?,
            max_terms: positive("--max-terms", a.max_terms.or(t.max_terms))?,
        };
        Ok(Settings {
            gamma: pick(a.gamma.as_ref(), g.gamma.as_ref(), "gamma")?,
            beta: pick(a.beta.as_ref(), g.beta.as_ref(), "beta")?,
            lambda,
            d: pick(a.d.as_ref(), g.d.as_ref(), "d")?,
            k: pick(a.k.as_ref(), g.k.as_ref(), "k")?,
            sides: pick(a.sides.as_ref(), g.sides.as_ref(), "sides")?,
            coupled: a.coupled || file.run.coupled.unwrap_or(false),
            format,
            jobs,
            out: a.out.clone().or(file.run.out.clone()),
            tol,
        })
    }
}

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let settings = match Settings::resolve(&cli.common) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("robin: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = settings.jobs {
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("robin: cannot start worker threads: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| pool.install(|| run(&cli.command, &settings))));
    ExitCode::from(match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(Failure::Usage(e))) => {
            eprintln!("robin: {e}");
            EXIT_USAGE
        }
        Ok(Err(Failure::Numeric(e))) => {
            eprintln!("robin: {e}");
            EXIT_PARTIAL
        }
        Ok(Err(Failure::Io(e))) => {
            eprintln!("robin: {e}");
            EXIT_INTERNAL
        }
        Err(_) => EXIT_INTERNAL,
    })
}

#[derive(Debug)]
pub enum Failure {
    Usage(UsageError),
    /// A computation needed before any row could be produced.
    Numeric(robin_spectra::Error),
    Io(std::io::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn run(command: &Command, s: &Settings) -> Result<u8, Failure> {
    let start = Instant::now();
    let (manifest, table) = match command {
        Command::Figures { which } => {
            let failed = figures::write(*which, s)?;
            return Ok(if failed > 0 { EXIT_PARTIAL } else { EXIT_OK });
        }
        Command::Selftest { only } => return selftest(only, s),
        Command::Eig => commands::eig(s)?,
        Command::Riesz => commands::riesz(s)?,
        Command::Constants => commands::constants(s)?,
        Command::Betaw => commands::betaw(s)?,
        Command::Betak => commands::betak(s)?,
        Command::Deficit => commands::deficit(s)?,
        Command::Oscillation => commands::oscillation(s)?,
        Command::Rexcess => commands::rexcess(s)?,
        Command::Optimize => commands::optimize(s)?,
        Command::Trajectory => commands::trajectory(s)?,
    };
    let wall = start.elapsed().as_secs_f64();
    let jobs = rayon::current_num_threads();
    let mut sink: Box<dyn Write> = match &s.out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match s.format.unwrap_or(Format::Csv) {
        Format::Csv => table::write_csv(&mut *sink, &manifest, &table)?,
        Format::Json => table::write_json(&mut *sink, &manifest, &table, wall, jobs)?,
    }
    sink.flush()?;
    let failed = table.failures();
    eprintln!("robin {}: {} rows, {failed} failed, {wall:.2}s on {jobs} threads", manifest.command, table.rows.len());
    Ok(if failed > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

fn selftest(only: &[u8], s: &Settings) -> Result<u8, Failure> {
    let ids: Vec<u8> = if only.is_empty() {
        robin_spectra::acceptance::criteria().map(|c| c.0).collect()
    } else {
        only.to_vec()
    };
    let known: Vec<u8> = robin_spectra::acceptance::criteria().map(|c| c.0).collect();
    if let Some(bad) = ids.iter().find(|i| !known.contains(i)) {
        return Err(UsageError(format!("no criterion {bad}; ids run from 1 to {}", known.len())).into());
    }
    let json = s.format == Some(Format::Json);
    let mut reports = Vec::new();
    for id in ids {
        let r = robin_spectra::acceptance::run(id).expect("known criterion");
        if !json {
            println!("{r}");
        }
        reports.push(r);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    if json {
        let text = serde_json::to_string_pretty(&reports).map_err(std::io::Error::other)?;
        println!("{text}");
    } else {
        println!("{passed} of {} criteria passed", reports.len());
    }
    Ok(if passed == reports.len() { EXIT_OK } else { EXIT_PARTIAL })
}
