//! Run settings: one flat key set shared by flags and config files.
//!
//! Every key can be given as a flag (`--n-sites 101`) or as a TOML key
//! (`n_sites = 101`). Precedence is flags > file > built-in defaults; the
//! worker count additionally honours `QPT_OVERLAP_WORKERS` between flags and
//! file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

pub const WORKERS_ENV: &str = "QPT_OVERLAP_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionArg {
    Lambda,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Overlap,
    SLambda,
    SGamma,
    EchoMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Paper,
    Literature,
}

/// Values for one layer (flags or file). Unset keys fall through to the next
/// layer.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// XY anisotropy γ
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// XY transverse field λ, or Dicke coupling
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Chain length (odd)
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// Sets both delta_lambda and delta_gamma
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_max: Option<f64>,
    #[arg(long)]
    pub gamma_points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_points: Option<usize>,
    /// Chain lengths for scaling fits, comma separated
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Susceptibility direction
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Grid quantity for xy-grid
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    /// Lower end of the fit window
    #[arg(long)]
    pub window_lo: Option<f64>,
    /// Upper end of the fit window
    #[arg(long)]
    pub window_hi: Option<f64>,
    /// Log-spaced points inside the fit window
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Dicke lower-energy discriminant
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Echo time window end
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub time_points: Option<usize>,
    /// RNG seed for verify
    #[arg(long)]
    pub seed: Option<u64>,
    /// Factor applied to recipe chain lengths
    #[arg(long)]
    pub scale: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps
    #[arg(long)]
    pub workers: Option<usize>,
}

fn to_map(s: &Settings) -> Map<String, Value> {
    match serde_json::to_value(s).expect("settings serialize") {
        Value::Object(m) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => unreachable!(),
    }
}

impl Settings {
    /// Keys that carry a value in this layer.
    pub fn keys(&self) -> Vec<String> {
        to_map(self).keys().cloned().collect()
    }

    /// `self` on top of `lower`.
    pub fn over(&self, lower: &Settings) -> Settings {
        let mut merged = to_map(&lower.expanded());
        merged.extend(to_map(&self.expanded()));
        serde_json::from_value(Value::Object(merged)).expect("merged settings deserialize")
    }

    /// `delta` applied to whichever of the two steps this layer leaves unset.
    fn expanded(&self) -> Settings {
        let mut s = self.clone();
        if let Some(d) = s.delta.take() {
            s.delta_lambda.get_or_insert(d);
            s.delta_gamma.get_or_insert(d);
        }
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |key: &str, msg: String| Err(CliError::usage(key, msg));
        if let Some(n) = self.n_sites {
            if n % 2 == 0 {
                return bad("n_sites", "n_sites must be odd".into());
            }
            if n < 3 {
                return bad("n_sites", format!("n_sites must be at least 3, got {n}"));
            }
        }
        if let Some(sizes) = &self.sizes {
            if let Some(n) = sizes.iter().find(|n| **n % 2 == 0 || **n < 3) {
                return bad("sizes", format!("chain lengths must be odd and at least 3, got {n}"));
            }
        }
        let reals = [
            ("gamma", self.gamma),
            ("lambda", self.lambda),
            ("delta", self.delta),
            ("delta_lambda", self.delta_lambda),
            ("delta_gamma", self.delta_gamma),
            ("gamma_min", self.gamma_min),
            ("gamma_max", self.gamma_max),
            ("lambda_min", self.lambda_min),
            ("lambda_max", self.lambda_max),
        ];
        for (key, v) in reals {
            if v.is_some_and(|v| !v.is_finite()) {
                return bad(key, format!("{key} must be finite"));
            }
        }
        let positive = [
            ("window_lo", self.window_lo),
            ("window_hi", self.window_hi),
            ("omega0", self.omega0),
            ("omega", self.omega),
            ("t_max", self.t_max),
            ("scale", self.scale),
        ];
        for (key, v) in positive {
            if v.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return bad(key, format!("{key} must be positive"));
            }
        }
        if let (Some(lo), Some(hi)) = (self.window_lo, self.window_hi) {
            if lo >= hi {
                return bad("window_lo", format!("window_lo ({lo}) must be below window_hi ({hi})"));
            }
        }
        if self.scale.is_some_and(|s| s > 1.0) {
            return bad("scale", "scale must lie in (0, 1]".into());
        }
        let counts = [
            ("gamma_points", self.gamma_points),
            ("lambda_points", self.lambda_points),
            ("points", self.points),
            ("time_points", self.time_points),
            ("workers", self.workers),
        ];
        for (key, v) in counts {
            if v == Some(0) {
                return bad(key, format!("{key} must be at least 1"));
            }
        }
        Ok(())
    }
}

/// Reads a flat TOML file of settings keys.
pub fn read_file(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        // type errors point at the value; report the key on that line
        let key = e.span().and_then(|span| {
            let line_start = text[..span.start].rfind('\n').map_or(0, |i| i + 1);
            let (key, _) = text[line_start..].split_once('=')?;
            Some(key.trim().to_string())
        });
        let msg = match key {
            Some(k) if !k.is_empty() && !e.message().contains(&k) => format!("key {k}: {}", e.message()),
            _ => e.message().to_string(),
        };
        CliError::Usage(format!("config {}: {msg}", path.display()))
    })
}

fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(WORKERS_ENV, format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Merged and validated settings for one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub settings: Settings,
    /// Recipe chain length before scaling; may be even.
    pub nominal_sites: Option<usize>,
}

/// Flags over `path` (if any) over defaults; both layers are validated.
pub fn load_config(path: Option<&Path>, flags: &Settings) -> Result<RunConfig, CliError> {
    let file = match path {
        Some(p) => read_file(p)?,
        None => Settings::default(),
    };
    file.validate()?;
    flags.validate()?;
    let mut settings = flags.over(&file);
    if flags.workers.is_none() {
        if let Some(n) = workers_from_env()? {
            settings.workers = Some(n);
        }
    }
    settings.validate()?;
    Ok(RunConfig { settings, nominal_sites: None })
}
