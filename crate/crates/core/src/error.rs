use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("orbit is already centered")]
    AlreadyCentered,

    #[error("empty input")]
    EmptyInput,

    #[error("sequence of length {len} is too short for lag {max_lag}")]
    Length { len: usize, max_lag: usize },

    #[error("series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    #[error("quadrature did not converge after {panels} panels (last change {delta:e})")]
    QuadratureNonConvergence { panels: usize, delta: f64 },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("unstable channel: pole magnitude {0} is not inside the unit circle")]
    UnstableChannel(f64),

    #[error("adaptive filter diverged at step {step} (|a| = {norm:e})")]
    Diverged { step: usize, norm: f64 },

    #[error("drive signal has {available} samples but {needed} are required")]
    DriveTooShort { needed: usize, available: usize },

    #[error("parse error in {path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
