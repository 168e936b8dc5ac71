//! Reproducible experiments: TOML configs, shipped presets, CSV and SVG
//! artifacts, and the three command entry points used by the binary.

pub mod bounds_cmd;
pub mod cli;
pub mod config;
pub mod estimate_cmd;
pub mod output;
pub mod presets;
pub mod stats_cmd;
pub mod svg;

pub use bounds_cmd::{bounds_row, cmd_bounds, BoundsRow};
pub use config::{ConfigFile, ExperimentConfig, ExperimentKind, MuChoice, RunConfig, StatsOptions};
pub use estimate_cmd::{cmd_estimate, run_experiment, EstimateOutcome, RunResult};
pub use output::{write_atomic, Manifest};
pub use presets::{load_preset, preset_names};
pub use stats_cmd::{cmd_stats, Check, StatsOutcome};

use crate::error::Error;

pub const SEED_ENV: &str = "CHAOTICLMS_SEED";

/// Process exit codes of the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    OracleMismatch = 1,
    Usage = 2,
    Diverged = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&Error> for ExitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Diverged { .. } => ExitStatus::Diverged,
            _ => ExitStatus::Usage,
        }
    }
}

/// Parses the seed override from `CHAOTICLMS_SEED`, if set.
pub fn seed_from_env() -> Result<Option<u64>, Error> {
    match std::env::var(SEED_ENV) {
        Ok(v) => parse_seed(&v).map(Some),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::Config(format!("{SEED_ENV}: {e}"))),
    }
}

pub fn parse_seed(v: &str) -> Result<u64, Error> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer")))
}
