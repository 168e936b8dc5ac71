//! Experiment configuration files.
//!
//! A config is a TOML document. Estimation configs look like
//!
//! ```toml
//! kind = "estimate"
//! name = "fig6"
//! seed = 6            # master seed, overridable by CHAOTICLMS_SEED
//! plot = true
//!
//! [defaults]          # any run key, applied to every [[run]]
//! m = 128
//! steps = 3000
//! replicates = 8
//!
//! [[run]]
//! label = "mu_max"
//! drive = "chaotic_centered"   # chaotic_raw | chaotic_centered | gaussian | external
//! mu = "max"                   # number | "normalized" | "max"
//! mu_scale = 1.0
//! ```
//!
//! Run keys: `label`, `drive`, `lambda`, `switch` (list of `[start, lambda]`),
//! `modulation` (`{ base, gain, signal }`), `signal` (`"synthetic"` or a path,
//! one sample per line), `sample_rate`, `std`, `x0`, `burn_in`, `mu`,
//! `mu_scale`, `m`, `steps`, `noise_std`, `replicates` and
//! `channel = { feedback = [...], feedforward = [...] }`.
//!
//! Stats configs set `kind = "stats"` and a `[stats]` table with the same
//! fields as the `stats` command flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logistic::{LambdaSchedule, LogisticParams, DEFAULT_BURN_IN};
use crate::sim::{
    load_external_signal, seeded_x0, stream_seed, synthetic_speech, DriveSource, Estimation, ExternalSignal,
    IirChannel, StepSize,
};
use crate::theory::mu_bound_fluctuation;

pub const DEFAULT_SEED: u64 = 20_130_401;
const DEFAULT_SAMPLE_RATE: u32 = 8000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Estimate,
    Stats,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum MuSpec {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default)]
    pub feedback: Vec<f64>,
    pub feedforward: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationSpec {
    pub base: f64,
    pub gain: f64,
    pub signal: String,
}

/// One `[[run]]` table (or `[defaults]`); every field is optional until merged.
#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drive: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub switch: Option<Vec<(usize, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulation: Option<ModulationSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_rate: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSpec>,
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunSpec {
    /// Fills unset fields from `defaults`.
    pub fn merged(&self, defaults: &RunSpec) -> RunSpec {
        let mut out = self.clone();
        merge_fields!(
            out,
            defaults,
            label,
            drive,
            lambda,
            switch,
            modulation,
            signal,
            sample_rate,
            std,
            x0,
            burn_in,
            mu,
            mu_scale,
            m,
            steps,
            noise_std,
            replicates,
            channel
        );
        out
    }
}

/// Options of the `stats` command, also readable from a `[stats]` table.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct StatsOptions {
    pub moments: Option<u32>,
    pub autocorr: Option<usize>,
    pub histogram: Option<usize>,
    pub bifurcation: bool,
    pub orbit: bool,
    pub centered: bool,
    pub samples: usize,
    pub lambda: f64,
    pub seed: Option<u64>,
    pub self_check: bool,
}

impl Default for StatsOptions {
    fn default() -> Self {
        Self {
            moments: None,
            autocorr: None,
            histogram: None,
            bifurcation: false,
            orbit: false,
            centered: false,
            samples: 100_000,
            lambda: 4.0,
            seed: None,
            self_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub kind: ExperimentKind,
    pub name: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub plot: Option<bool>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub stats: Option<StatsOptions>,
    #[serde(default)]
    pub defaults: Option<RunSpec>,
    #[serde(default)]
    pub run: Vec<RunSpec>,
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

/// Drive description after validation.
#[derive(Debug, Clone, PartialEq)]
pub enum DriveSpec {
    Gaussian {
        std: f64,
    },
    Chaotic {
        centered: bool,
        schedule: LambdaSchedule,
        x0: Option<f64>,
        burn_in: usize,
    },
    External {
        signal: ExternalSignal,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuChoice {
    Fixed(f64),
    Normalized,
    /// `scale * 16 / (3 + 2m)`.
    Max {
        scale: f64,
    },
}

impl MuChoice {
    pub fn resolve(&self, m: usize) -> StepSize {
        match *self {
            MuChoice::Fixed(v) => StepSize::Fixed(v),
            MuChoice::Normalized => StepSize::Normalized,
            MuChoice::Max { scale } => StepSize::Fixed(scale * mu_bound_fluctuation(m)),
        }
    }
}

/// A validated run, ready to expand into per-replicate estimations.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub label: String,
    pub drive: DriveSpec,
    pub channel: IirChannel,
    pub m: usize,
    pub mu: MuChoice,
    pub steps: usize,
    pub noise_std: f64,
    pub replicates: usize,
    /// Merged spec as written, kept for the manifest.
    pub spec: RunSpec,
}

impl RunConfig {
    /// Replicate `k` uses seed `stream_seed(master, k)`, shared by all runs of
    /// an experiment so drives are compared on common random numbers.
    pub fn estimation(&self, master_seed: u64, replicate: usize) -> Result<Estimation> {
        let seed = stream_seed(master_seed, replicate as u64);
        let drive = match &self.drive {
            DriveSpec::Gaussian { std } => DriveSource::GaussianWhite {
                seed: stream_seed(seed, 2),
                std: *std,
            },
            DriveSpec::Chaotic {
                centered,
                schedule,
                x0,
                burn_in,
            } => {
                let params = LogisticParams {
                    lambda: schedule.lambda_at(0),
                    x0: x0.unwrap_or_else(|| seeded_x0(seed)),
                    burn_in: *burn_in,
                };
                params.validate()?;
                if *centered {
                    DriveSource::ChaoticCentered {
                        params,
                        schedule: schedule.clone(),
                    }
                } else {
                    DriveSource::ChaoticRaw {
                        params,
                        schedule: schedule.clone(),
                    }
                }
            }
            DriveSpec::External { signal } => DriveSource::External { signal: signal.clone() },
        };
        Ok(Estimation {
            drive,
            channel: self.channel.clone(),
            m: self.m,
            mu: self.mu.resolve(self.m),
            n_steps: self.steps,
            noise_std: self.noise_std,
            seed,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub plot: bool,
    pub out: Option<PathBuf>,
    pub runs: Vec<RunConfig>,
}

fn load_signal(spec: &str, base_dir: &Path, rate: u32, min_len: usize) -> Result<ExternalSignal> {
    if spec == "synthetic" {
        return Ok(synthetic_speech(min_len.max(rate as usize), rate));
    }
    let path = base_dir.join(spec);
    load_external_signal(&path, rate).map_err(|e| Error::Config(format!("signal {}: {e}", path.display())))
}

fn resolve_run(spec: RunSpec, index: usize, base_dir: &Path) -> Result<RunConfig> {
    let label = spec.label.clone().unwrap_or_else(|| format!("run{index}"));
    if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(Error::Config(format!("run label {label:?} must be [A-Za-z0-9_-]+")));
    }
    let ctx = |msg: String| Error::Config(format!("run {label}: {msg}"));

    let m = spec.m.ok_or_else(|| ctx("missing m".into()))?;
    let steps = spec.steps.ok_or_else(|| ctx("missing steps".into()))?;
    if steps == 0 {
        return Err(ctx("steps must be positive".into()));
    }
    let noise_std = spec.noise_std.unwrap_or(0.0);
    if !(noise_std >= 0.0) {
        return Err(ctx(format!("noise_std {noise_std} must be nonnegative")));
    }
    let replicates = spec.replicates.unwrap_or(1);
    if replicates == 0 {
        return Err(ctx("replicates must be positive".into()));
    }
    let channel = match &spec.channel {
        Some(c) => IirChannel::new(c.feedback.clone(), c.feedforward.clone()).map_err(|e| ctx(e.to_string()))?,
        None => IirChannel::reference(),
    };

    let scale = spec.mu_scale.unwrap_or(1.0);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(ctx(format!("mu_scale {scale} must be positive")));
    }
    let mu = match spec.mu.as_ref().ok_or_else(|| ctx("missing mu".into()))? {
        MuSpec::Value(v) if *v > 0.0 && v.is_finite() => MuChoice::Fixed(v * scale),
        MuSpec::Value(v) => return Err(ctx(format!("mu {v} must be positive"))),
        MuSpec::Keyword(k) if k == "normalized" => MuChoice::Normalized,
        MuSpec::Keyword(k) if k == "max" => MuChoice::Max { scale },
        MuSpec::Keyword(k) => return Err(ctx(format!("unknown mu keyword {k:?}"))),
    };

    let rate = spec.sample_rate.unwrap_or(DEFAULT_SAMPLE_RATE);
    let drive_kind = spec.drive.as_deref().ok_or_else(|| ctx("missing drive".into()))?;
    let drive = match drive_kind {
        "gaussian" => {
            let std = spec.std.unwrap_or(0.125f64.sqrt());
            if !(std > 0.0) {
                return Err(ctx(format!("std {std} must be positive")));
            }
            DriveSpec::Gaussian { std }
        }
        "chaotic_raw" | "chaotic_centered" => {
            let given = [spec.lambda.is_some(), spec.switch.is_some(), spec.modulation.is_some()];
            if given.iter().filter(|&&g| g).count() > 1 {
                return Err(ctx("set only one of lambda, switch, modulation".into()));
            }
            let schedule = if let Some(segments) = &spec.switch {
                LambdaSchedule::Switched(segments.clone())
            } else if let Some(md) = &spec.modulation {
                let signal = load_signal(&md.signal, base_dir, rate, steps).map_err(|e| ctx(e.to_string()))?;
                LambdaSchedule::Modulated {
                    base: md.base,
                    gain: md.gain,
                    signal: signal.samples,
                }
            } else {
                LambdaSchedule::Constant(spec.lambda.unwrap_or(4.0))
            };
            schedule.validate().map_err(|e| ctx(e.to_string()))?;
            if let Some(limit) = schedule.len_limit() {
                if limit < steps {
                    return Err(ctx(format!("modulating signal has {limit} samples, need {steps}")));
                }
            }
            if let Some(x0) = spec.x0 {
                if !(x0 > 0.0 && x0 < 1.0) {
                    return Err(ctx(format!("x0 {x0} must lie in (0, 1)")));
                }
            }
            DriveSpec::Chaotic {
                centered: drive_kind == "chaotic_centered",
                schedule,
                x0: spec.x0,
                burn_in: spec.burn_in.unwrap_or(DEFAULT_BURN_IN),
            }
        }
        "external" => {
            let src = spec
                .signal
                .as_deref()
                .ok_or_else(|| ctx("external drive needs signal".into()))?;
            // m leading samples fill the regressor before the first update
            let needed = steps + m;
            let signal = load_signal(src, base_dir, rate, needed).map_err(|e| ctx(e.to_string()))?;
            if signal.samples.len() < needed {
                return Err(ctx(format!(
                    "signal has {} samples, need {needed}",
                    signal.samples.len()
                )));
            }
            DriveSpec::External { signal }
        }
        other => return Err(ctx(format!("unknown drive {other:?}"))),
    };

    Ok(RunConfig {
        label,
        drive,
        channel,
        m,
        mu,
        steps,
        noise_std,
        replicates,
        spec,
    })
}

impl ExperimentConfig {
    /// Validates every run before anything is executed. Relative signal paths
    /// are taken relative to `base_dir`.
    pub fn from_file(file: ConfigFile, base_dir: &Path, seed_override: Option<u64>) -> Result<Self> {
        if file.kind != ExperimentKind::Estimate {
            return Err(Error::Config(format!("{} is not an estimation config", file.name)));
        }
        if file.run.is_empty() {
            return Err(Error::Config(format!("{} defines no runs", file.name)));
        }
        let defaults = file.defaults.clone().unwrap_or_default();
        let runs = file
            .run
            .iter()
            .enumerate()
            .map(|(i, r)| resolve_run(r.merged(&defaults), i, base_dir))
            .collect::<Result<Vec<_>>>()?;
        let mut labels: Vec<&str> = runs.iter().map(|r| r.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Config(format!("duplicate run label {}", w[0])));
        }
        Ok(Self {
            name: file.name,
            seed: seed_override.or(file.seed).unwrap_or(DEFAULT_SEED),
            plot: file.plot.unwrap_or(true),
            out: file.out,
            runs,
        })
    }
}
