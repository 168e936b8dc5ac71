use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sim::{FirTaps, GaussianSource};

/// Rational transfer function
/// `H(z) = (b0 + b1 z^-1 + ...) / (1 + a1 z^-1 + a2 z^-2 + ...)`.
///
/// `feedback` holds `a1, a2, ...` (leading 1 implicit) and `feedforward`
/// holds `b0, b1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct IirChannel {
    feedback: Vec<f64>,
    feedforward: Vec<f64>,
}

impl IirChannel {
    /// Fails with [`Error::UnstableChannel`] unless every pole lies strictly
    /// inside the unit circle.
    pub fn new(feedback: Vec<f64>, feedforward: Vec<f64>) -> Result<Self> {
        if feedforward.is_empty() {
            return Err(Error::Domain(
                "channel needs at least one feedforward coefficient".into(),
            ));
        }
        if feedback.iter().chain(&feedforward).any(|c| !c.is_finite()) {
            return Err(Error::Domain("channel coefficients must be finite".into()));
        }
        let radius = pole_radius(&feedback);
        if !(radius < 1.0) {
            return Err(Error::UnstableChannel(radius));
        }
        Ok(Self { feedback, feedforward })
    }

    /// `H(z) = 1 / (1 - 0.2 z^-1 + 0.49 z^-2 + 0.292 z^-3)`.
    pub fn reference() -> Self {
        Self::new(vec![-0.2, 0.49, 0.292], vec![1.0]).expect("reference channel is stable")
    }

    pub fn identity() -> Self {
        Self::new(vec![], vec![1.0]).unwrap()
    }

    pub fn feedback(&self) -> &[f64] {
        &self.feedback
    }

    pub fn feedforward(&self) -> &[f64] {
        &self.feedforward
    }

    /// Largest pole magnitude.
    pub fn pole_radius(&self) -> f64 {
        pole_radius(&self.feedback)
    }

    /// Runs the difference equation from rest.
    pub fn filter(&self, input: &[f64]) -> Vec<f64> {
        let mut y = Vec::with_capacity(input.len());
        for n in 0..input.len() {
            let mut acc = 0.0;
            for (k, b) in self.feedforward.iter().enumerate().take(n + 1) {
                acc += b * input[n - k];
            }
            for (k, a) in self.feedback.iter().enumerate().take(n) {
                acc -= a * y[n - 1 - k];
            }
            y.push(acc);
        }
        y
    }

    /// First `length` samples of the impulse response.
    pub fn impulse_response(&self, length: usize) -> Result<FirTaps> {
        if length == 0 {
            return Err(Error::Domain("impulse response length must be at least 1".into()));
        }
        let mut impulse = vec![0.0; length];
        impulse[0] = 1.0;
        Ok(FirTaps(self.filter(&impulse)))
    }

    /// Channel response plus white Gaussian noise of standard deviation
    /// `noise_std`, drawn from stream `seed`.
    pub fn output(&self, input: &[f64], noise_std: f64, seed: u64) -> Vec<f64> {
        let mut y = self.filter(input);
        if noise_std > 0.0 {
            let mut noise = GaussianSource::new(seed, noise_std);
            y.iter_mut().for_each(|v| *v += noise.sample());
        }
        y
    }
}

fn pole_radius(feedback: &[f64]) -> f64 {
    let n = feedback.len();
    if n == 0 {
        return 0.0;
    }
    // companion matrix of z^n + a1 z^(n-1) + ... + an
    let mut c = DMatrix::<f64>::zeros(n, n);
    for (j, a) in feedback.iter().enumerate() {
        c[(0, j)] = -a;
    }
    for i in 1..n {
        c[(i, i - 1)] = 1.0;
    }
    c.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn filter_is_linear(xs in prop::collection::vec(-1.0f64..1.0, 1..60), k in -3.0f64..3.0) {
            let c = IirChannel::reference();
            let scaled: Vec<f64> = xs.iter().map(|v| k * v).collect();
            let (y, yk) = (c.filter(&xs), c.filter(&scaled));
            for (a, b) in y.iter().zip(&yk) {
                prop_assert!((k * a - b).abs() < 1e-9);
            }
        }
    }
}
