use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;

/// Confluent hypergeometric series `sum_r (a)_r / ((b)_r r!) xi^r`.
///
/// Summation stops once the magnitude of the next term drops below `tol`.
pub fn kummer_series(a: f64, b: f64, xi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Domain(format!("b = {b} is a nonpositive integer")));
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for r in 0..MAX_TERMS {
        sum += term;
        let rf = r as f64;
        term *= (a + rf) / ((b + rf) * (rf + 1.0)) * xi;
        if term.abs() < tol {
            return Ok(sum);
        }
        if !term.is_finite() {
            break;
        }
    }
    Err(Error::SeriesNonConvergence { terms: MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn zero_argument() {
        assert_eq!(kummer_series(0.3, 1.7, 0.0, 1e-15).unwrap(), 1.0);
    }

    #[test]
    fn exponential_case() {
        let v = kummer_series(1.0, 1.0, 1.0, 1e-14).unwrap();
        assert!((v - E).abs() < 1e-13);
    }

    #[test]
    fn half_one_matches_integral() {
        // Gamma(1) / (Gamma(1/2)^2) * int_0^1 x^(-1/2) (1-x)^(-1/2) e^x dx, evaluated
        // after x = sin^2(t) as (2/pi) int_0^(pi/2) exp(sin^2 t) dt with Simpson's rule.
        let n = 2000;
        let h = (PI / 2.0) / n as f64;
        let f = |t: f64| (t.sin().powi(2)).exp();
        let mut s = f(0.0) + f(PI / 2.0);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        let oracle = 2.0 / PI * s * h / 3.0;
        let v = kummer_series(0.5, 1.0, 1.0, 1e-15).unwrap();
        assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(kummer_series(0.5, -2.0, 1.0, 1e-10).is_err());
        assert!(kummer_series(0.5, 0.0, 1.0, 1e-10).is_err());
        assert!(kummer_series(0.5, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn cap_reached() {
        assert!(matches!(
            kummer_series(1.0, 1.0, 1e6, 1e-300),
            Err(Error::SeriesNonConvergence { .. })
        ));
    }
}
