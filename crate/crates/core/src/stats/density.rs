use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Arcsine density `1 / (pi * sqrt(x (1 - x)))`, singular at both endpoints.
pub fn invariant_density(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("density is singular or undefined at x = {x}")));
    }
    Ok(1.0 / (PI * (x * (1.0 - x)).sqrt()))
}

/// `(2 / pi) * asin(sqrt(x))`, the integral of [`invariant_density`] from 0.
pub fn invariant_cdf(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("cdf argument {x} outside [0, 1]")));
    }
    Ok(2.0 / PI * x.sqrt().asin())
}

/// Probability mass of `[lo, hi]` under the invariant density. Edges outside
/// `[0, 1]` are clamped.
pub fn expected_bin_probability(lo: f64, hi: f64) -> f64 {
    let cdf = |x: f64| 2.0 / PI * x.clamp(0.0, 1.0).sqrt().asin();
    (cdf(hi) - cdf(lo)).max(0.0)
}
