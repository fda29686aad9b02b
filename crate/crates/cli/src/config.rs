//! Run configuration: flags first, then environment, then defaults.

use std::path::PathBuf;

use clap::ValueEnum;
use szpiro_core::heights::PrecisionTarget;

use crate::CliError;

pub const ENV_PRECISION: &str = "SZPIRO_PRECISION";
pub const ENV_WORKERS: &str = "SZPIRO_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub precision: PrecisionTarget,
    pub j: usize,
    pub k_cap: u64,
    /// `None` leaves the choice to rayon.
    pub workers: Option<usize>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { precision: PrecisionTarget::default(), j: 1, k_cap: 1_000_000, workers: None, format: None, output: None }
    }
}

/// Global flags as parsed, before the environment is consulted.
#[derive(Clone, Debug, Default)]
pub struct GlobalFlags {
    pub precision: Option<f64>,
    pub workers: Option<usize>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(flags: &GlobalFlags, env: &dyn Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        let precision = match flags.precision {
            Some(p) => p,
            None => match env(ENV_PRECISION) {
                Some(s) => s.trim().parse().map_err(|_| CliError::Input(format!("{ENV_PRECISION}: not a number: {s}")))?,
                None => PrecisionTarget::default().0,
            },
        };
        let workers = match flags.workers {
            Some(w) => Some(w),
            None => match env(ENV_WORKERS) {
                Some(s) => Some(s.trim().parse().map_err(|_| CliError::Input(format!("{ENV_WORKERS}: not a count: {s}")))?),
                None => None,
            },
        };
        let cfg = RunConfig {
            precision: PrecisionTarget(precision),
            workers,
            format: flags.format,
            output: flags.output.clone(),
            ..RunConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = self.precision.0;
        if !(p.is_finite() && p > 0.0 && p < 1.0) {
            return Err(CliError::Input(format!("precision must lie in (0, 1), got {p}")));
        }
        if self.workers == Some(0) {
            return Err(CliError::Input("worker count must be at least 1".into()));
        }
        if self.k_cap == 0 {
            return Err(CliError::Input("k cap must be at least 1".into()));
        }
        Ok(())
    }
}
