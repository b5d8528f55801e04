//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when validation fails or a run errors, 2 for
//! a bad configuration or bad arguments.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::Error;

pub use output::CsvTable;

/// Spectral efficiency of the nonlinear fiber channel.
#[derive(Debug, Parser)]
#[command(name = "fibercap", version)]
pub struct Cli {
    /// Shared flags.
    #[command(flatten)]
    pub global: GlobalArgs,
    /// What to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, env = "FIBERCAP_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Table format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Output table format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Comma-separated values with a `#` comment line.
    Csv,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate g(β̃) by several methods.
    Gfun {
        /// Comma-separated β̃ values (overrides the config range).
        #[arg(long, value_delimiter = ',')]
        beta: Option<Vec<f64>>,
        /// Comma-separated methods: series, cubature, asymptotic, riemann, sine_grid.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
    /// Spectral efficiency of each model over an SNR grid.
    Sweep {
        /// Rescale β to this β̃.
        #[arg(long)]
        beta_tilde: Option<f64>,
    },
    /// Crossover SNR and applicability bound for each β̃.
    Crossover {
        /// Comma-separated β̃ values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![200.0, 800.0])]
        beta_tilde: Vec<f64>,
        /// Largest accepted penalty ratio for the applicability bound.
        #[arg(long, default_value_t = fibercap_core::channels::DEFAULT_APPLICABILITY_RATIO)]
        ratio: f64,
    },
    /// Propagate one random input through the link and write the output spectrum.
    Simulate {
        /// Also write the output field as a binary snapshot.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Monte-Carlo mutual information of the zero-dispersion channel.
    MiMc,
    /// Run the validation checks and print a key=value report.
    Validate {
        /// Work scale.
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Deliberately break a component to exercise the checks.
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Data behind the figures.
    Figure {
        /// Which figure.
        #[arg(value_enum)]
        which: FigureArg,
    },
}

/// Validation scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    /// Reduced sample counts.
    Fast,
    /// Full sample counts.
    Full,
}

/// Faults for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Route every g evaluation to the asymptotic form.
    GDispatch,
}

/// Figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    /// g(β̃), exact and asymptotic.
    Fig1,
    /// Spectral efficiency at β̃ = 200.
    Fig2,
    /// Spectral efficiency at β̃ = 800.
    Fig3,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Everything passed.
    Ok,
    /// Validation found failures.
    ChecksFailed,
}

/// Parses arguments from the process and runs.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    run(&cli)
}

/// Runs a parsed command line and maps the outcome to an exit code.
pub fn run(cli: &Cli) -> ExitCode {
    let config = match &cli.global.config {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    };
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fibercap: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("fibercap: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| commands::dispatch(cli, &config)) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Err(e @ Error::Config(_)) => {
            eprintln!("fibercap: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("fibercap: {e}");
            ExitCode::from(1)
        }
    }
}
