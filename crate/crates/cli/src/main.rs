mod commands;
mod config;
mod plot;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

/// Low-lying zero statistics for two families of elliptic curves.
#[derive(Parser, Debug)]
#[command(name = "lowlying", version)]
pub struct Cli {
    /// key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker threads (default: all cores); output does not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form family averages against brute force, exactly
    VerifyAverages(VerifyAveragesArgs),
    /// Hecke traces by Eichler–Selberg, Δ and curve moments
    Traces(TracesArgs),
    /// Truncated Euler product A(α, γ)
    EulerProduct(EulerProductArgs),
    /// Scaled one-level density with its 1/L expansion
    PredictDensity(PredictDensityArgs),
    /// Zeros of one Washington L-function up to a height
    Zeros(ZerosArgs),
    /// Empirical one-level sums over a range of Washington curves
    Empirical(EmpiricalArgs),
    /// Slopes of partial Euler products at s = 1
    Bsd(BsdArgs),
}

#[derive(Args, Debug)]
pub struct VerifyAveragesArgs {
    #[arg(long, default_value_t = 1)]
    pub family: u32,
    #[arg(long, default_value_t = 97)]
    pub pmax: u64,
    /// largest m1 for the all-curves family (m2 runs over 0..=2)
    #[arg(long, default_value_t = 8)]
    pub m1_max: usize,
}

#[derive(Args, Debug)]
pub struct TracesArgs {
    #[arg(long, default_value_t = 12)]
    pub weight_min: u32,
    #[arg(long, default_value_t = 22)]
    pub weight_max: u32,
    #[arg(long, default_value_t = 97)]
    pub pmax: u64,
}

#[derive(Args, Debug)]
pub struct EulerProductArgs {
    #[arg(long, default_value_t = 1)]
    pub family: u32,
    /// re[,im]
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha: String,
    /// re[,im]
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, default_value_t = 10_000)]
    pub prime_cutoff: u64,
    #[arg(long, default_value_t = 14)]
    pub order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct PredictDensityArgs {
    #[arg(long, default_value_t = 1)]
    pub family: u32,
    #[arg(long = "X", default_value_t = 1e12)]
    pub x: f64,
    #[arg(long, default_value_t = 10_000)]
    pub prime_cutoff: u64,
    #[arg(long, default_value_t = 14)]
    pub order: usize,
    #[arg(long, default_value_t = 0.1)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub tau_max: f64,
    /// number of grid points, endpoints included
    #[arg(long, default_value_t = 30)]
    pub tau_steps: usize,
    #[arg(long, default_value = "gaussian")]
    pub test_function: String,
    /// Fejér support a (ψ̂ lives on [−a, a])
    #[arg(long, default_value_t = 1.0)]
    pub support: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// also write a gnuplot script here
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t_param: i64,
    #[arg(long, default_value_t = 10.0)]
    pub height: f64,
    /// accept t ≢ 1 (mod 12) with a conductor confirmed by the functional equation
    #[arg(long)]
    pub candidate: bool,
}

#[derive(Args, Debug)]
pub struct EmpiricalArgs {
    /// a:b or a:b:step, inclusive
    #[arg(long, allow_hyphen_values = true)]
    pub t_range: String,
    #[arg(long, default_value = "gaussian")]
    pub test_function: String,
    #[arg(long, default_value_t = 1.0)]
    pub support: f64,
    /// scale parameter (default: mean conductor of the curves used)
    #[arg(long = "X")]
    pub x: Option<f64>,
    /// include curves whose conductor is confirmed only numerically
    #[arg(long)]
    pub candidates: bool,
    /// append the ratios prediction and the limiting value
    #[arg(long)]
    pub predict: bool,
    #[arg(long, default_value_t = 10_000)]
    pub prime_cutoff: u64,
    #[arg(long, default_value_t = 14)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct BsdArgs {
    /// comma-separated parameters
    #[arg(long = "t", allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub t: Vec<i64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub xmax: u64,
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Assertion(String),
    Runtime(String),
}

impl Failure {
    fn kind(&self) -> (&'static str, u8) {
        match self {
            Failure::Config(_) => ("config", 2),
            Failure::Assertion(_) => ("assertion", 1),
            Failure::Runtime(_) => ("runtime", 1),
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Assertion(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<lowlying::Error> for Failure {
    fn from(e: lowlying::Error) -> Self {
        use lowlying::Error as E;
        match e {
            E::Domain(_) | E::InvalidArgument(_) | E::NotPrime(_) => Failure::Config(e.to_string()),
            E::InsufficientTerms { .. } | E::NoConvergence(_) => Failure::Runtime(e.to_string()),
        }
    }
}

/// What a subcommand produced: the main artifact, plus an assertion failure
/// to report after the artifact has been written.
pub struct Outcome {
    pub body: String,
    pub failed: Option<String>,
}

fn fail(f: Failure) -> ExitCode {
    let (kind, code) = f.kind();
    let line = json!({ "error": kind, "message": f.message() });
    let _ = writeln!(std::io::stderr(), "{line}");
    ExitCode::from(code)
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn run(argv: Vec<String>) -> Result<(), Failure> {
    let argv = config::merge(argv).map_err(Failure::Config)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => return Err(Failure::Config(e.render().to_string().trim().to_string())),
    };
    commands::validate(&cli.command)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Runtime(e.to_string()))?;
    let outcome = pool.install(|| commands::dispatch(&cli.command))?;
    emit(cli.out.as_ref(), &outcome.body)?;
    match outcome.failed {
        Some(msg) => Err(Failure::Assertion(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}
