//! Front end for `qpt-overlap`: parameter sweeps, power-law fits, figure
//! recipes and the oracle verification run.
//!
//! Exit codes: 0 on success, 1 on a compute error or failed verification,
//! 2 on invalid flags, config keys or values.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
pub mod config;
mod verify;

pub use config::{load_config, RunConfig, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(#[from] qpt_overlap::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub(crate) fn usage(key: &str, msg: impl Into<String>) -> Self {
        CliError::Usage(format!("invalid value for {key}: {}", msg.into()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qpt-overlap",
    version,
    about = "Ground-state overlap diagnostics for the XY chain and the Dicke model"
)]
pub struct Cli {
    /// Flat TOML file with default values for any flag (keys use underscores)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    /// Dicke overlap against λ below λ_c
    Fig1,
    /// XY overlap on the (γ, λ) plane
    Fig2a,
    /// S^λ on the (γ, λ) plane
    Fig2b,
    /// S^γ on the (γ, λ) plane
    Fig2c,
    /// Finite-size slopes of S^λ and S^γ
    Scaling,
    /// α and β exponents
    Asymptotic,
    /// Dicke overlap exponent near λ_c
    DickeExponent,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Overlap or susceptibility on a γ × λ grid (CSV)
    XyGrid(Settings),
    /// Finite-size scaling fit of S^λ or S^γ
    XyScaling(Settings),
    /// Power-law fit of S^λ near λ = 1 or S^γ near γ = 0
    XyAsymptotic(Settings),
    /// Overlap between two nearby XY ground states
    XyOverlap(Settings),
    /// Dicke overlap against λ
    DickeOverlap(Settings),
    /// Exponent of the Dicke overlap near λ_c
    DickeExponent(Settings),
    /// Loschmidt echo time series (CSV)
    Loschmidt(Settings),
    /// Compare closed forms with the numerical oracles
    Verify(Settings),
    /// Rerun a published figure or claim
    Reproduce {
        #[arg(value_enum)]
        recipe: Recipe,
        #[command(flatten)]
        settings: Settings,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::XyGrid(_) => "xy-grid",
            Command::XyScaling(_) => "xy-scaling",
            Command::XyAsymptotic(_) => "xy-asymptotic",
            Command::XyOverlap(_) => "xy-overlap",
            Command::DickeOverlap(_) => "dicke-overlap",
            Command::DickeExponent(_) => "dicke-exponent",
            Command::Loschmidt(_) => "loschmidt",
            Command::Verify(_) => "verify",
            Command::Reproduce { .. } => "reproduce",
        }
    }

    pub fn settings(&self) -> &Settings {
        match self {
            Command::XyGrid(s)
            | Command::XyScaling(s)
            | Command::XyAsymptotic(s)
            | Command::XyOverlap(s)
            | Command::DickeOverlap(s)
            | Command::DickeExponent(s)
            | Command::Loschmidt(s)
            | Command::Verify(s)
            | Command::Reproduce { settings: s, .. } => s,
        }
    }

    /// Keys this subcommand reads besides output, format and workers.
    fn keys(&self) -> &'static [&'static str] {
        match self {
            Command::XyGrid(_) => &[
                "n_sites",
                "delta",
                "delta_lambda",
                "delta_gamma",
                "gamma_min",
                "gamma_max",
                "gamma_points",
                "lambda_min",
                "lambda_max",
                "lambda_points",
                "quantity",
                "t_max",
                "time_points",
            ],
            Command::XyScaling(_) => &["gamma", "lambda", "sizes", "direction"],
            Command::XyAsymptotic(_) => {
                &["gamma", "lambda", "n_sites", "direction", "window_lo", "window_hi", "points"]
            }
            Command::XyOverlap(_) => &["gamma", "lambda", "n_sites", "delta", "delta_lambda", "delta_gamma"],
            Command::DickeOverlap(_) => {
                &["omega0", "omega", "variant", "delta", "delta_lambda", "lambda_min", "lambda_max", "lambda_points"]
            }
            Command::DickeExponent(_) => {
                &["omega0", "omega", "variant", "delta", "delta_lambda", "window_lo", "window_hi", "points"]
            }
            Command::Loschmidt(_) => {
                &["gamma", "lambda", "n_sites", "delta", "delta_lambda", "delta_gamma", "t_max", "time_points"]
            }
            Command::Verify(_) => &["seed"],
            Command::Reproduce { .. } => {
                &["scale", "n_sites", "delta", "delta_lambda", "delta_gamma", "gamma_points", "lambda_points", "points"]
            }
        }
    }

    fn check_flags(&self) -> Result<(), CliError> {
        let allowed = self.keys();
        for key in self.settings().keys() {
            if !allowed.contains(&key.as_str()) && !["output", "format", "workers"].contains(&key.as_str()) {
                return Err(CliError::Usage(format!("--{} does not apply to {}", key.replace('_', "-"), self.name())));
            }
        }
        Ok(())
    }
}

pub(crate) fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.settings.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Usage(format!("invalid value for output: cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    cli.command.check_flags()?;
    let mut flags = cli.command.settings().clone();
    // recipes take --n-sites as a nominal size and round it up to odd
    let nominal = match cli.command {
        Command::Reproduce { .. } => flags.n_sites.take(),
        _ => None,
    };
    if nominal == Some(0) {
        return Err(CliError::usage("n_sites", "n_sites must be positive"));
    }
    let mut cfg = load_config(cli.config.as_deref(), &flags)?;
    cfg.nominal_sites = nominal;
    commands::dispatch(&cli.command, &cfg)
}
