use std::fmt;

use crate::error::{Error, Result};

/// Tap-norm above which an adaptation run is declared diverged.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// FIR coefficient vector of length `m + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirTaps(pub Vec<f64>);

impl FirTaps {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    /// `||self - other||^2`.
    pub fn distance_sq(&self, other: &FirTaps) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

/// LMS step size: fixed, or `1 / ||x_i||^2` recomputed every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    Normalized,
}

impl fmt::Display for StepSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepSize::Fixed(mu) => write!(f, "{mu}"),
            StepSize::Normalized => f.write_str("normalized"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmsState {
    pub taps: FirTaps,
    pub mu: StepSize,
    /// Last `m + 1` inputs, most recent first.
    pub window: Vec<f64>,
    pub step: usize,
}

impl LmsState {
    /// Zero taps and an all-zero input window.
    pub fn new(m: usize, mu: StepSize) -> Result<Self> {
        Self::with_taps(FirTaps::zeros(m + 1), mu)
    }

    pub fn with_taps(taps: FirTaps, mu: StepSize) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Domain("filter needs at least one tap".into()));
        }
        if let StepSize::Fixed(v) = mu {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("step size {v} must be finite and nonnegative")));
            }
        }
        let n = taps.len();
        Ok(Self {
            taps,
            mu,
            window: vec![0.0; n],
            step: 0,
        })
    }

    pub fn predict(&self) -> f64 {
        self.taps.0.iter().zip(&self.window).map(|(a, x)| a * x).sum()
    }

    /// Shifts `x_new` into the window without adapting.
    pub fn push(&mut self, x_new: f64) {
        self.window.rotate_right(1);
        self.window[0] = x_new;
    }

    /// Shifts `x_new` into the window, forms `e = r - a^T x` and applies
    /// `a <- a + mu e x`. Returns the a-priori error.
    ///
    /// Fails with [`Error::Diverged`] once `||a||` exceeds [`DIVERGENCE_NORM`];
    /// the state is left at the diverged taps.
    pub fn step(&mut self, x_new: f64, r: f64) -> Result<f64> {
        self.push(x_new);
        let e = r - self.predict();
        let mu = match self.mu {
            StepSize::Fixed(mu) => mu,
            StepSize::Normalized => {
                let p: f64 = self.window.iter().map(|v| v * v).sum();
                if p > f64::MIN_POSITIVE {
                    1.0 / p
                } else {
                    0.0
                }
            }
        };
        let g = mu * e;
        for (a, x) in self.taps.0.iter_mut().zip(&self.window) {
            *a += g * x;
        }
        self.step += 1;
        let norm = self.taps.norm_sq().sqrt();
        if !(norm <= DIVERGENCE_NORM) {
            return Err(Error::Diverged { step: self.step, norm });
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_prediction_leaves_taps() {
        let mut s = LmsState::with_taps(FirTaps(vec![0.5, -0.25]), StepSize::Fixed(0.3)).unwrap();
        s.window = vec![0.2, 0.0];
        // after the shift the window is [0.4, 0.2]
        let r = 0.5 * 0.4 - 0.25 * 0.2;
        let e = s.step(0.4, r).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(s.taps.0, vec![0.5, -0.25]);
        assert_eq!(s.window, vec![0.4, 0.2]);
    }

    #[test]
    fn single_tap_update() {
        let mut s = LmsState::new(0, StepSize::Fixed(1.0)).unwrap();
        let e = s.step(0.5, 0.5).unwrap();
        assert_eq!(e, 0.5);
        assert_eq!(s.taps.0, vec![0.25]);
        assert_eq!(s.step, 1);
    }

    #[test]
    fn frozen_filter() {
        let mut s = LmsState::new(3, StepSize::Fixed(0.0)).unwrap();
        for k in 0..100 {
            s.step((k as f64).sin(), (k as f64).cos()).unwrap();
        }
        assert_eq!(s.taps, FirTaps::zeros(4));
    }

    #[test]
    fn normalized_step_projects() {
        // with mu = 1/||x||^2 the a-posteriori error vanishes
        let mut s = LmsState::new(2, StepSize::Normalized).unwrap();
        s.step(0.3, 0.0).unwrap();
        s.step(-0.7, 0.0).unwrap();
        s.step(0.2, 1.0).unwrap();
        assert!((s.predict() - 1.0).abs() < 1e-12);
        // zero window does not produce NaN
        let mut z = LmsState::new(2, StepSize::Normalized).unwrap();
        z.step(0.0, 1.0).unwrap();
        assert_eq!(z.taps, FirTaps::zeros(3));
    }

    #[test]
    fn divergence_alarm() {
        let mut s = LmsState::new(0, StepSize::Fixed(10.0)).unwrap();
        let mut alarm = None;
        for _ in 0..200 {
            if let Err(Error::Diverged { step, .. }) = s.step(1.0, 1.0) {
                alarm = Some(step);
                break;
            }
        }
        assert!(alarm.is_some());
    }

    #[test]
    fn invalid_states() {
        assert!(LmsState::with_taps(FirTaps(vec![]), StepSize::Fixed(0.1)).is_err());
        assert!(LmsState::new(2, StepSize::Fixed(-0.1)).is_err());
        assert!(LmsState::new(2, StepSize::Fixed(f64::NAN)).is_err());
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn exact_prediction_leaves_taps(
            taps in prop::collection::vec(-2.0f64..2.0, 1..8),
            x in -1.0f64..1.0,
            mu in 0.0f64..2.0,
        ) {
            let mut s = LmsState::with_taps(FirTaps(taps.clone()), StepSize::Fixed(mu)).unwrap();
            let mut probe = s.clone();
            probe.push(x);
            let e = s.step(x, probe.predict()).unwrap();
            prop_assert_eq!(e, 0.0);
            prop_assert_eq!(s.taps.0, taps);
        }
    }
}
