//! `mcmc-cert`: error bounds, burn-in tables, plans and empirical checks from the command line.

mod commands;
mod config;
mod csv;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use commands::Overrides;
use config::{parse_config, BurninTableConfig, Config, Figure, FigureConfig, NormalsTableConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Lib(#[from] mcmc_cert::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use mcmc_cert::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse { .. } | CliError::Schema(_) | CliError::Io(_) => 3,
            CliError::Lib(
                E::NumericalFailure(_)
                | E::GapExhausted { .. }
                | E::DegenerateChord { .. }
                | E::NonConvergent { .. }
                | E::CountOverflow { .. },
            ) => 4,
            CliError::Lib(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mcmc-cert", version, about = "Explicit error bounds for Markov chain Monte Carlo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration ("version": 1).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for randomized runs; drawn from system entropy and reported when omitted.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override the number of independent replications.
    #[arg(long, global = true, value_name = "N")]
    replications: Option<u64>,
    /// Worker threads for replicated runs.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues and integrand coefficients of a finite chain.
    FiniteSpectrum,
    /// Exact MSE and certified bounds of a finite chain over an n grid.
    FiniteError,
    /// Gaps, initial constant and suggested burn-in of a finite chain.
    FiniteBurnin,
    /// Closed-form error curves of the circle, hypercube and star families.
    FiniteExample,
    /// Evaluate the general upper bound est(n, n0).
    BoundEval,
    /// Optimal and suggested burn-ins over (N, beta) grids.
    BurninTable,
    /// Plans for the contracting normal chain.
    NormalsTable,
    /// Step size, burn-in and sample size for a target precision.
    Plan,
    /// Empirical MSE over independent replications, optionally certified.
    Estimate,
    /// Exact error and bound curves for plotting.
    FigureData {
        /// Figure to produce (overrides `which` in the configuration).
        #[arg(long, value_enum)]
        which: Option<Figure>,
    },
}

fn load(path: &Option<PathBuf>) -> Result<Option<Config>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map(Some)
}

fn required(cfg: Option<Config>, command: &str) -> Result<Config, CliError> {
    cfg.ok_or_else(|| CliError::Usage(format!("{command} needs --config PATH")))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start the thread pool: {e}")))?;
    }
    let overrides = Overrides { seed: cli.seed, replications: cli.replications };
    let cfg = load(&cli.config)?;
    match &cli.command {
        Command::FiniteSpectrum => commands::finite_spectrum(&required(cfg, "finite-spectrum")?),
        Command::FiniteError => commands::finite_error(&required(cfg, "finite-error")?),
        Command::FiniteBurnin => commands::finite_burnin(&required(cfg, "finite-burnin")?),
        Command::FiniteExample => commands::finite_example(&required(cfg, "finite-example")?),
        Command::BoundEval => match required(cfg, "bound-eval")? {
            Config::Bound(b) => commands::bound_eval(&b),
            other => Err(commands::wrong_kind(&other, "bound")),
        },
        Command::BurninTable => match cfg {
            None => commands::burnin_table(&BurninTableConfig::default()),
            Some(Config::BurninTable(b)) => commands::burnin_table(&b),
            Some(other) => Err(commands::wrong_kind(&other, "burnin_table")),
        },
        Command::NormalsTable => match cfg {
            None => commands::normals_table(&NormalsTableConfig::default()),
            Some(Config::NormalsTable(b)) => commands::normals_table(&b),
            Some(other) => Err(commands::wrong_kind(&other, "normals_table")),
        },
        Command::Plan => match required(cfg, "plan")? {
            Config::Plan(p) => commands::plan(&p),
            other => Err(commands::wrong_kind(&other, "plan")),
        },
        Command::Estimate => match required(cfg, "estimate")? {
            Config::Estimate(e) => {
                let (text, seed) = commands::estimate(&e, overrides)?;
                if cli.seed.is_none() && e.seed.is_none() {
                    eprintln!("seed: {seed}");
                }
                Ok(text)
            }
            other => Err(commands::wrong_kind(&other, "estimate")),
        },
        Command::FigureData { which } => {
            let mut fig = match cfg {
                None => FigureConfig {
                    which: which.ok_or_else(|| CliError::Usage("figure-data needs --which or --config".into()))?,
                    totals: None,
                    n0: None,
                },
                Some(Config::Figure(f)) => f,
                Some(other) => return Err(commands::wrong_kind(&other, "figure")),
            };
            if let Some(w) = which {
                fig.which = *w;
            }
            commands::figure_data(&fig)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mcmc-cert: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
