//! Drive signals for the adaptive filter.
//!
//! Gaussian deviates come from the Box-Muller transform over a ChaCha8
//! keystream (`rand_chacha::ChaCha8Rng::seed_from_u64`). Uniforms use the top
//! 53 bits of each 64-bit word, mapped to `(0, 1]`. Independent runs take
//! separate ChaCha streams of one master seed, see [`stream_seed`].

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logistic::{center, generate_orbit, LambdaSchedule, LogisticParams};

/// Seed of sub-stream `index` of `master`, stable across platforms.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Uniform deviate in `(0, 1]`.
fn unit_open_closed(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Initial condition in `[0.01, 0.99]` drawn from `seed`.
pub fn seeded_x0(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    0.01 + 0.98 * unit_open_closed(&mut rng)
}

/// Seedable white Gaussian generator.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha8Rng,
    std: f64,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64, std: f64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            std,
            spare: None,
        }
    }

    /// Standard normal deviate.
    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = unit_open_closed(&mut self.rng);
        let u2 = unit_open_closed(&mut self.rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn sample(&mut self) -> f64 {
        self.std * self.standard()
    }
}

/// `n` deviates with standard deviation `std` from `seed`.
pub fn gaussian_source(seed: u64, n: usize, std: f64) -> Result<Vec<f64>> {
    if !(std > 0.0) {
        return Err(Error::Domain(format!("standard deviation must be positive, got {std}")));
    }
    let mut g = GaussianSource::new(seed, std);
    Ok((0..n).map(|_| g.sample()).collect())
}

/// A normalized external signal with its nominal sample rate (metadata only).
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSignal {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

/// Reads a text file with one decimal sample per line and rescales it so the
/// largest magnitude is 1. Blank lines and lines starting with `#` are skipped.
pub fn load_external_signal(path: &Path, expected_rate: u32) -> Result<ExternalSignal> {
    let text = fs::read_to_string(path)?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("{e}: {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                msg: "non-finite sample".into(),
            });
        }
        samples.push(v);
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(ExternalSignal {
        samples: normalize_peak(samples)?,
        sample_rate: expected_rate,
    })
}

/// Divides by the peak magnitude; the peak sample becomes exactly `+-1`.
pub fn normalize_peak(mut samples: Vec<f64>) -> Result<Vec<f64>> {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::Domain("cannot normalize an all-zero signal".into()));
    }
    samples.iter_mut().for_each(|v| *v /= peak);
    Ok(samples)
}

/// Speech-like stand-in: three incommensurate tones under a slow syllabic
/// envelope, normalized to unit peak.
pub fn synthetic_speech(n: usize, sample_rate: u32) -> ExternalSignal {
    let fs = f64::from(sample_rate);
    let raw: Vec<f64> = (0..n.max(1))
        .map(|k| {
            let t = k as f64 / fs;
            let envelope = 0.55 + 0.45 * (2.0 * PI * 3.1 * t).sin() * (2.0 * PI * 0.7 * t + 0.3).cos();
            let tones = (2.0 * PI * 211.0 * t).sin()
                + 0.6 * (2.0 * PI * 211.0 * 2f64.sqrt() * t + 1.1).sin()
                + 0.35 * (2.0 * PI * 211.0 * 5f64.sqrt() * t + 2.3).sin();
            envelope * tones
        })
        .collect();
    let mut samples = normalize_peak(raw).expect("synthetic signal is nonzero");
    samples.truncate(n);
    ExternalSignal { samples, sample_rate }
}

/// Source of the filter input sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum DriveSource {
    ChaoticRaw {
        params: LogisticParams,
        schedule: LambdaSchedule,
    },
    /// Chaotic samples shifted by `-1/2`.
    ChaoticCentered {
        params: LogisticParams,
        schedule: LambdaSchedule,
    },
    GaussianWhite {
        seed: u64,
        std: f64,
    },
    External {
        signal: ExternalSignal,
    },
}

impl DriveSource {
    pub fn kind(&self) -> &'static str {
        match self {
            DriveSource::ChaoticRaw { .. } => "chaotic_raw",
            DriveSource::ChaoticCentered { .. } => "chaotic_centered",
            DriveSource::GaussianWhite { .. } => "gaussian",
            DriveSource::External { .. } => "external",
        }
    }

    pub fn is_chaotic(&self) -> bool {
        matches!(
            self,
            DriveSource::ChaoticRaw { .. } | DriveSource::ChaoticCentered { .. }
        )
    }

    pub fn generate(&self, n: usize) -> Result<Vec<f64>> {
        self.generate_with_history(n, 0)
    }

    /// `history + n` samples where the schedule of a chaotic drive is aligned
    /// so that its index 0 falls on sample `history`. The leading samples fill
    /// the filter's regressor before adaptation starts.
    pub fn generate_with_history(&self, n: usize, history: usize) -> Result<Vec<f64>> {
        let total = n + history;
        match self {
            DriveSource::ChaoticRaw { params, schedule } => {
                Ok(generate_orbit(params, total, &schedule.delayed(history))?.samples)
            }
            DriveSource::ChaoticCentered { params, schedule } => {
                Ok(center(generate_orbit(params, total, &schedule.delayed(history))?)?.samples)
            }
            DriveSource::GaussianWhite { seed, std } => gaussian_source(*seed, total, *std),
            DriveSource::External { signal } => {
                if signal.samples.len() < total {
                    return Err(Error::DriveTooShort {
                        needed: total,
                        available: signal.samples.len(),
                    });
                }
                Ok(signal.samples[..total].to_vec())
            }
        }
    }
}
