//! `catcf`: evaluate, discover and verify Catalan-constant continued fractions.

mod commands;
mod config;
mod grid;
mod selector;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use catalan_cf::Error;
use config::{Layer, RunConfig, CONFIG_ENV};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn verify(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::RhoMismatch { .. }
            | Error::MissingParams(_)
            | Error::InsufficientData { .. }
            | Error::Io(_) => EXIT_USAGE,
            Error::SelfCheck { .. } => EXIT_VERIFY,
            _ => EXIT_NUMERIC,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

#[derive(Parser, Debug)]
#[command(name = "catcf", version, about = "Catalan-constant continued fractions: evaluation, relation discovery and verification")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GlobalArgs {
    /// Decimal digits of working precision (>= 30).
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Number of continued-fraction terms (>= 100).
    #[arg(long, global = true)]
    depth: Option<u64>,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory caching digits of G.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Directory of bootstrapped kappa parameters.
    #[arg(long, global = true)]
    params_dir: Option<PathBuf>,
    /// Configuration file of key = value lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a continued fraction.
    Eval(commands::EvalArgs),
    /// Find alpha, beta, gamma with limit alpha/(beta + gamma G).
    Discover(commands::DiscoverArgs),
    /// Run verification suites and report pass/fail per item.
    Verify(commands::VerifyArgs),
    /// Generate {c, kappa, rho, alpha, gamma} data files over a grid.
    Grid(grid::GridArgs),
    /// Recover and persist closed-form parameters for a kappa.
    Bootstrap(commands::BootstrapArgs),
    /// Factor integers.
    Factor(commands::FactorArgs),
    /// Fit products of factorial-type building blocks to a data series.
    Fit(commands::FitArgs),
    /// Guess a linear recurrence with polynomial coefficients.
    Guess(commands::GuessArgs),
    /// Print the sequence D(c, kappa) as c,value lines.
    Delta(commands::DeltaArgs),
}

fn resolve_config(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let file_path = global
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let file = file_path.as_deref().map(Layer::from_file).transpose()?;
    let env = Layer::from_env(|k| std::env::var(k).ok())?;
    let flags = Layer {
        digits: global.digits,
        depth: global.depth,
        jobs: global.jobs,
        cache_dir: global.cache_dir.clone(),
        params_dir: global.params_dir.clone(),
        ..Layer::default()
    };
    RunConfig::resolve(file, env, flags)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve_config(&cli.global)?;
    if let Some(dir) = &cfg.cache_dir {
        // read once by the process-wide G engine
        std::env::set_var(config::CACHE_ENV, dir);
    }
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start {jobs} workers: {e}")))?;
    }
    match cli.command {
        Command::Eval(a) => commands::eval(&a, &cfg),
        Command::Discover(a) => commands::discover(&a, &cfg),
        Command::Verify(a) => commands::verify(&a, &cfg),
        Command::Grid(a) => grid::grid(&a, &cfg),
        Command::Bootstrap(a) => commands::bootstrap(&a, &cfg),
        Command::Factor(a) => commands::factor(&a),
        Command::Fit(a) => commands::fit(&a, &cfg),
        Command::Guess(a) => commands::guess(&a),
        Command::Delta(a) => commands::delta(&a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
