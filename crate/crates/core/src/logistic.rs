//! Logistic-map orbit generation.
//!
//! Orbits are produced by iterating `x -> lambda * x * (1 - x)` on `[0, 1]`,
//! where `lambda` may be held constant, switched at fixed sample indices, or
//! modulated by a bounded information signal. A zero-mean version of an orbit
//! is obtained by [`center`], which subtracts the `f_4` mean `1/2`.

use std::io::Write;

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Initial condition used when none is given. Chosen away from the finite
/// preimage set of the fixed points of `f_4`.
pub const DEFAULT_X0: f64 = 0.123456789;

/// Leading iterates discarded before samples are kept.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Consecutive stagnant steps (under `lambda = 4`) that flag a degenerate orbit.
const DEGENERATE_RUN: usize = 100;
const DEGENERATE_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    pub lambda: f64,
    pub x0: f64,
    pub burn_in: usize,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            lambda: 4.0,
            x0: DEFAULT_X0,
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

impl LogisticParams {
    pub fn new(lambda: f64, x0: f64, burn_in: usize) -> Result<Self> {
        let params = Self { lambda, x0, burn_in };
        params.validate()?;
        Ok(params)
    }

    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return Err(Error::Domain(format!("x0 = {} must lie in (0, 1)", self.x0)));
        }
        Ok(())
    }

    /// Constant schedule at `self.lambda`.
    pub fn schedule(&self) -> LambdaSchedule {
        LambdaSchedule::Constant(self.lambda)
    }

    /// Convenience for `generate_orbit(self, n, &self.schedule())`.
    pub fn orbit(&self, n: usize) -> Result<Orbit> {
        generate_orbit(self, n, &self.schedule())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 4.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} must lie in (0, 4]")))
    }
}

/// Rule producing the bifurcation parameter used at each sample index.
///
/// Index `i` refers to the kept samples: `lambda_at(i)` maps sample `i` to
/// sample `i + 1`. Burn-in iterates use `lambda_at(0)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSchedule {
    Constant(f64),
    /// `(start_index, lambda)` segments; the first must start at 0.
    Switched(Vec<(usize, f64)>),
    /// `lambda_i = base + gain * signal[i]` with `|signal[i]| <= 1`.
    Modulated {
        base: f64,
        gain: f64,
        signal: Vec<f64>,
    },
}

impl LambdaSchedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            LambdaSchedule::Constant(l) => check_lambda(*l),
            LambdaSchedule::Switched(segments) => {
                let first = segments
                    .first()
                    .ok_or_else(|| Error::Schedule("switched schedule has no segments".into()))?;
                if first.0 != 0 {
                    return Err(Error::Schedule(format!(
                        "first segment starts at {}, expected 0",
                        first.0
                    )));
                }
                for pair in segments.windows(2) {
                    if pair[1].0 <= pair[0].0 {
                        return Err(Error::Schedule(format!(
                            "segment start {} does not follow {}",
                            pair[1].0, pair[0].0
                        )));
                    }
                }
                segments.iter().try_for_each(|&(_, l)| check_lambda(l))
            }
            LambdaSchedule::Modulated { base, gain, signal } => {
                let g = gain.abs();
                if !(base + g <= 4.0 && base - g > 0.0) {
                    return Err(Error::Schedule(format!(
                        "modulation range [{}, {}] leaves (0, 4]",
                        base - g,
                        base + g
                    )));
                }
                if let Some((i, s)) = signal.iter().enumerate().find(|(_, s)| !(s.abs() <= 1.0)) {
                    return Err(Error::Schedule(format!(
                        "modulating sample {i} = {s} exceeds unit magnitude"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Number of indices the schedule can serve, `None` if unbounded.
    pub fn len_limit(&self) -> Option<usize> {
        match self {
            LambdaSchedule::Modulated { signal, .. } => Some(signal.len()),
            _ => None,
        }
    }

    /// The same schedule started `h` samples later; the first `h` indices
    /// repeat `lambda_at(0)`.
    pub fn delayed(&self, h: usize) -> LambdaSchedule {
        match self {
            LambdaSchedule::Constant(l) => LambdaSchedule::Constant(*l),
            LambdaSchedule::Switched(segments) => LambdaSchedule::Switched(
                segments
                    .iter()
                    .map(|&(start, l)| (if start == 0 { 0 } else { start + h }, l))
                    .collect(),
            ),
            LambdaSchedule::Modulated { base, gain, signal } => {
                let lead = signal.first().copied().unwrap_or(0.0);
                LambdaSchedule::Modulated {
                    base: *base,
                    gain: *gain,
                    signal: std::iter::repeat_n(lead, h).chain(signal.iter().copied()).collect(),
                }
            }
        }
    }

    pub fn lambda_at(&self, i: usize) -> f64 {
        match self {
            LambdaSchedule::Constant(l) => *l,
            LambdaSchedule::Switched(segments) => {
                let k = segments.partition_point(|&(start, _)| start <= i);
                segments[k.saturating_sub(1)].1
            }
            LambdaSchedule::Modulated { base, gain, signal } => (base + gain * signal[i]).min(4.0),
        }
    }
}

/// One application of the logistic map.
pub fn iterate_map(lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    Ok(map_unchecked(lambda, x))
}

#[inline]
pub(crate) fn map_unchecked(lambda: f64, x: f64) -> f64 {
    lambda * x * (1.0 - x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub samples: Vec<f64>,
    pub schedule: LambdaSchedule,
    pub centered: bool,
    pub burn_in: usize,
    pub x0: f64,
    /// Set when the orbit collapsed onto a fixed point of `f_4`.
    pub degenerate: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Bifurcation parameter applied to sample `i`.
    pub fn lambda_at(&self, i: usize) -> f64 {
        self.schedule.lambda_at(i)
    }

    /// First index `i` where `samples[i + 1]` disagrees with the map applied to
    /// `samples[i]` by more than `tol`, or `None` if the orbit is consistent.
    pub fn recurrence_violation(&self, tol: f64) -> Option<usize> {
        let shift = if self.centered { 0.5 } else { 0.0 };
        self.samples.windows(2).enumerate().find_map(|(i, w)| {
            let u = w[0] + shift;
            let next = map_unchecked(self.lambda_at(i), u);
            ((w[1] + shift - next).abs() > tol).then_some(i)
        })
    }

    /// CSV export with header `index,lambda,sample` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,lambda,sample")?;
        for (i, s) in self.samples.iter().enumerate() {
            writeln!(out, "{},{:.16e},{:.16e}", i, self.lambda_at(i), s)?;
        }
        Ok(())
    }
}

/// Iterates the map from `params.x0`, discards `params.burn_in` iterates and
/// keeps `n` samples. The schedule supersedes `params.lambda`.
///
/// A degenerate orbit (stuck on a fixed point under `lambda = 4`) is logged and
/// flagged in [`Orbit::degenerate`] rather than rejected.
pub fn generate_orbit(params: &LogisticParams, n: usize, schedule: &LambdaSchedule) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::Domain("orbit length must be at least 1".into()));
    }
    if !(params.x0 > 0.0 && params.x0 < 1.0) {
        return Err(Error::Domain(format!("x0 = {} must lie in (0, 1)", params.x0)));
    }
    schedule.validate()?;
    if let Some(limit) = schedule.len_limit() {
        if limit < n {
            return Err(Error::DriveTooShort {
                needed: n,
                available: limit,
            });
        }
    }

    let total_steps = params.burn_in + n - 1;
    let threshold = DEGENERATE_RUN.min(total_steps);
    let mut stagnant = 0usize;
    let mut degenerate = false;
    let mut track = |lambda: f64, prev: f64, next: f64| {
        if lambda == 4.0 && (next - prev).abs() < DEGENERATE_EPS {
            stagnant += 1;
            if threshold > 0 && stagnant >= threshold {
                degenerate = true;
            }
        } else {
            stagnant = 0;
        }
    };

    let mut x = params.x0;
    let burn_lambda = schedule.lambda_at(0);
    for _ in 0..params.burn_in {
        let next = map_unchecked(burn_lambda, x);
        track(burn_lambda, x, next);
        x = next;
    }

    let mut samples = Vec::with_capacity(n);
    samples.push(x);
    for i in 0..n - 1 {
        let lambda = schedule.lambda_at(i);
        let next = map_unchecked(lambda, x);
        track(lambda, x, next);
        x = next;
        samples.push(x);
    }

    if degenerate {
        warn!(
            "orbit from x0 = {} collapsed onto a fixed point; statistics will not reflect the invariant density",
            params.x0
        );
    }

    Ok(Orbit {
        samples,
        schedule: schedule.clone(),
        centered: false,
        burn_in: params.burn_in,
        x0: params.x0,
        degenerate,
    })
}

/// Shifts every sample by `-1/2`, the mean of the invariant density of `f_4`.
pub fn center(orbit: Orbit) -> Result<Orbit> {
    if orbit.centered {
        return Err(Error::AlreadyCentered);
    }
    let mut orbit = orbit;
    orbit.samples.iter_mut().for_each(|s| *s -= 0.5);
    orbit.centered = true;
    Ok(orbit)
}

/// Inverse of [`center`]. Bit-exact for raw samples in `[1/4, 1]`; below that
/// the shift can lose the low bits of the original sample.
pub fn uncenter(orbit: Orbit) -> Result<Orbit> {
    if !orbit.centered {
        return Err(Error::Domain("orbit is not centered".into()));
    }
    let mut orbit = orbit;
    orbit.samples.iter_mut().for_each(|s| *s += 0.5);
    orbit.centered = false;
    Ok(orbit)
}

/// One column of a bifurcation diagram: `keep` iterates after `settle`
/// transient steps from `x0` at a fixed `lambda`.
pub fn bifurcation_column(lambda: f64, x0: f64, settle: usize, keep: usize) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::Domain(format!("x0 = {x0} outside [0, 1]")));
    }
    let mut x = x0;
    for _ in 0..settle {
        x = map_unchecked(lambda, x);
    }
    let mut kept = Vec::with_capacity(keep);
    for _ in 0..keep {
        x = map_unchecked(lambda, x);
        kept.push(x);
    }
    Ok(kept)
}

/// Bifurcation diagram over an evenly spaced grid of `lambda_steps` values in
/// `[lambda_min, lambda_max]`, both ends included.
pub fn bifurcation_scan(
    lambda_min: f64,
    lambda_max: f64,
    lambda_steps: usize,
    settle: usize,
    keep: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(lambda_min > 0.0 && lambda_min < lambda_max && lambda_max <= 4.0) {
        return Err(Error::Domain(format!(
            "need 0 < lambda_min < lambda_max <= 4, got [{lambda_min}, {lambda_max}]"
        )));
    }
    if lambda_steps == 0 || settle == 0 || keep == 0 {
        return Err(Error::Domain("lambda_steps, settle and keep must be positive".into()));
    }
    let step = if lambda_steps > 1 {
        (lambda_max - lambda_min) / (lambda_steps - 1) as f64
    } else {
        0.0
    };
    let columns: Result<Vec<Vec<(f64, f64)>>> = (0..lambda_steps)
        .into_par_iter()
        .map(|k| {
            let lambda = if k + 1 == lambda_steps && lambda_steps > 1 {
                lambda_max
            } else {
                lambda_min + step * k as f64
            };
            let col = bifurcation_column(lambda, DEFAULT_X0, settle, keep)?;
            Ok(col.into_iter().map(|x| (lambda, x)).collect())
        })
        .collect();
    Ok(columns?.into_iter().flatten().collect())
}
