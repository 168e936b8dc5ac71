//! Closed-form LMS performance theory for `f_4` drive signals.
//!
//! For the raw sequence the `(m+1) x (m+1)` autocorrelation matrix has `3/8`
//! on the diagonal and `1/4` elsewhere, i.e. `I/8 + (1/4) 1 1^T`. Its
//! eigenvalues are `(2m+3)/8` along the all-ones vector and `1/8` with
//! multiplicity `m`, so the spread is `2m + 3`. The zero-mean
//! sequence gives `R = I/8`, for which the fluctuation recursion reduces to
//! the scalar factor `1 - mu/4 + (3/128 + m/64) mu^2`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Symmetric Toeplitz expectation matrix of size `(order + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub order: usize,
    pub entries: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Builds the matrix whose `(i, j)` entry is `first_row[|i - j|]`.
    pub fn toeplitz(first_row: &[f64]) -> Self {
        let n = first_row.len();
        assert!(n > 0, "empty Toeplitz row");
        let entries = DMatrix::from_fn(n, n, |i, j| first_row[i.abs_diff(j)]);
        Self { order: n - 1, entries }
    }

    pub fn dim(&self) -> usize {
        self.order + 1
    }

    pub fn is_symmetric_toeplitz(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[(i, j)] == self.entries[(0, i.abs_diff(j))]))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (&self.entries * DVector::from_column_slice(v)).as_slice().to_vec()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    /// Sorted in decreasing order.
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub sigma: f64,
}

impl SpectrumSummary {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let lambda_max = eigenvalues[0];
        let lambda_min = *eigenvalues.last().unwrap();
        Self {
            sigma: lambda_max / lambda_min,
            eigenvalues,
            lambda_max,
            lambda_min,
        }
    }
}

pub fn build_correlation_matrix(m: usize, centered: bool) -> CorrelationMatrix {
    let mut row = vec![if centered { 0.0 } else { 0.25 }; m + 1];
    row[0] = if centered { 0.125 } else { 0.375 };
    CorrelationMatrix::toeplitz(&row)
}

pub fn analytic_spectrum(m: usize, centered: bool) -> SpectrumSummary {
    let mut eig = vec![0.125; m + 1];
    if !centered {
        eig[0] = (2 * m + 3) as f64 / 8.0;
    }
    SpectrumSummary::from_eigenvalues(eig)
}

/// Mean-convergence bound `2 / lambda_max`.
pub fn mu_bound_mean(m: usize, centered: bool) -> f64 {
    2.0 / analytic_spectrum(m, centered).lambda_max
}

/// Fluctuation bound `16 / (3 + 2m)` for the zero-mean drive.
pub fn mu_bound_fluctuation(m: usize) -> f64 {
    16.0 / (3.0 + 2.0 * m as f64)
}

/// `3/128 + m/64`, the diagonal of `E[(x^T x)(x x^T)]` for the zero-mean drive.
pub fn fourth_moment_coefficient(m: usize) -> f64 {
    3.0 / 128.0 + m as f64 / 64.0
}

/// Per-step factor `|1 - mu/4 + (3/128 + m/64) mu^2|` of the expected squared
/// coefficient error.
pub fn fluctuation_decay_factor(mu: f64, m: usize) -> f64 {
    (1.0 - mu / 4.0 + fourth_moment_coefficient(m) * mu * mu).abs()
}

pub fn fourth_moment_matrix(m: usize) -> CorrelationMatrix {
    let mut row = vec![0.0; m + 1];
    row[0] = fourth_moment_coefficient(m);
    CorrelationMatrix::toeplitz(&row)
}

/// `b + R^{-1} rho`, solved by LU with partial pivoting.
pub fn wiener_solution(b: &[f64], r: &CorrelationMatrix, rho: &[f64]) -> Result<Vec<f64>> {
    let n = r.dim();
    for len in [b.len(), rho.len()] {
        if len != n {
            return Err(Error::Dimension { expected: n, got: len });
        }
    }
    let lu = r.entries.clone().lu();
    let v = lu
        .solve(&DVector::from_column_slice(rho))
        .ok_or(Error::SingularMatrix)?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularMatrix);
    }
    Ok(b.iter().zip(v.iter()).map(|(bi, vi)| bi + vi).collect())
}

/// Sliding-window estimate of `E[x x^T]` with `x_i = (s_i, ..., s_(i-m))`.
pub fn empirical_correlation_matrix(samples: &[f64], m: usize) -> Result<CorrelationMatrix> {
    window_average(samples, m, |_| 1.0)
}

/// Sliding-window estimate of `E[(x^T x)(x x^T)]`.
pub fn empirical_fourth_moment_matrix(samples: &[f64], m: usize) -> Result<CorrelationMatrix> {
    window_average(samples, m, |w| w.iter().map(|v| v * v).sum())
}

fn window_average<F: Fn(&[f64]) -> f64>(samples: &[f64], m: usize, weight: F) -> Result<CorrelationMatrix> {
    let n = m + 1;
    if samples.len() < n {
        return Err(Error::Length {
            len: samples.len(),
            max_lag: m,
        });
    }
    let mut acc = DMatrix::<f64>::zeros(n, n);
    let count = samples.len() - m;
    for w in samples.windows(n) {
        let s = weight(w);
        // most recent sample first
        for i in 0..n {
            let wi = s * w[m - i];
            for j in i..n {
                acc[(i, j)] += wi * w[m - j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            acc[(i, j)] = acc[(j, i)];
        }
    }
    Ok(CorrelationMatrix {
        order: m,
        entries: acc / count as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices() {
        let r = build_correlation_matrix(1, false);
        assert_eq!(r.entries, DMatrix::from_row_slice(2, 2, &[0.375, 0.25, 0.25, 0.375]));
        let r = build_correlation_matrix(2, true);
        assert_eq!(r.entries, DMatrix::identity(3, 3) * 0.125);
        assert_eq!(build_correlation_matrix(0, false).entries[(0, 0)], 0.375);
        assert!(build_correlation_matrix(7, false).is_symmetric_toeplitz());
    }

    #[test]
    fn spectra() {
        let s = analytic_spectrum(3, false);
        assert_eq!(s.eigenvalues, vec![1.125, 0.125, 0.125, 0.125]);
        assert_eq!(s.sigma, 9.0);
        assert_eq!(analytic_spectrum(1, false).eigenvalues, vec![0.625, 0.125]);
        assert_eq!(analytic_spectrum(128, false).sigma, 259.0);
        assert_eq!(analytic_spectrum(128, true).sigma, 1.0);
    }

    #[test]
    fn eigen_identity_by_multiplication() {
        for m in [0usize, 1, 5, 64, 256] {
            let r = build_correlation_matrix(m, false);
            let n = m + 1;
            let ones = vec![1.0; n];
            let top = (2 * m + 3) as f64 / 8.0;
            assert!(r.mul_vec(&ones).iter().all(|v| (v - top).abs() < 1e-12));
            if n > 1 {
                // e_0 - e_1 is orthogonal to the all-ones vector
                let mut v = vec![0.0; n];
                v[0] = 1.0;
                v[1] = -1.0;
                let rv = r.mul_vec(&v);
                for (a, b) in rv.iter().zip(&v) {
                    assert!((a - b / 8.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn step_bounds() {
        assert_eq!(mu_bound_mean(10, true), 16.0);
        assert!((mu_bound_mean(3, false) - 16.0 / 9.0).abs() < 1e-15);
        assert!((mu_bound_mean(0, false) - 16.0 / 3.0).abs() < 1e-15);
        assert!((mu_bound_fluctuation(128) - 16.0 / 259.0).abs() < 1e-17);
        assert!((mu_bound_fluctuation(128) - 0.0617761).abs() < 1e-7);
        assert_eq!(mu_bound_fluctuation(0), 16.0 / 3.0);
        for m in 0..500 {
            assert!(mu_bound_fluctuation(m) < mu_bound_mean(m, true));
            assert!(mu_bound_fluctuation(m + 1) < mu_bound_fluctuation(m));
        }
    }

    #[test]
    fn decay_factor() {
        assert_eq!(fluctuation_decay_factor(0.0, 17), 1.0);
        let d = fluctuation_decay_factor(16.0 / 259.0, 128);
        assert!((d - (1.0 - 2.0 / 259.0)).abs() < 1e-15);
        for m in [0usize, 3, 128] {
            let edge = 32.0 / (3.0 + 2.0 * m as f64);
            assert!((fluctuation_decay_factor(edge, m) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn decay_factor_grid_scan() {
        for m in [0usize, 2, 10, 128] {
            let edge = 32.0 / (3.0 + 2.0 * m as f64);
            let grid: Vec<f64> = (1..4000).map(|k| k as f64 * edge * 1.5 / 4000.0).collect();
            for &mu in &grid {
                let below = fluctuation_decay_factor(mu, m) < 1.0;
                assert_eq!(below, mu < edge, "m = {m}, mu = {mu}");
            }
            let best = grid
                .iter()
                .copied()
                .min_by(|a, b| fluctuation_decay_factor(*a, m).total_cmp(&fluctuation_decay_factor(*b, m)))
                .unwrap();
            let step = edge * 1.5 / 4000.0;
            assert!((best - mu_bound_fluctuation(m)).abs() <= step);
        }
    }

    #[test]
    fn fourth_moment() {
        assert_eq!(fourth_moment_matrix(0).entries[(0, 0)], 3.0 / 128.0);
        let f = fourth_moment_matrix(128);
        assert_eq!(f.entries, DMatrix::identity(129, 129) * 2.0234375);
        assert_eq!(fourth_moment_matrix(5).entries[(3, 3)], 0.1015625);
    }

    #[test]
    fn wiener() {
        let b = [0.3, -0.7];
        let r = build_correlation_matrix(1, false);
        assert_eq!(wiener_solution(&b, &r, &[0.0, 0.0]).unwrap(), b.to_vec());

        let r = build_correlation_matrix(3, true);
        let x = wiener_solution(&[0.0; 4], &r, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(x, vec![0.0, 0.0, 8.0, 0.0]);

        let r = build_correlation_matrix(1, false);
        let x = wiener_solution(&b, &r, &[0.125, 0.125]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-14 && (x[1] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn empirical_matrices_on_short_sequence() {
        let s = [1.0, 2.0, 3.0];
        let r = empirical_correlation_matrix(&s, 1).unwrap();
        // windows (1,2) and (2,3)
        assert_eq!(r.entries, DMatrix::from_row_slice(2, 2, &[6.5, 4.0, 4.0, 2.5]));
        let f = empirical_fourth_moment_matrix(&s, 1).unwrap();
        assert_eq!(f.entries[(0, 1)], (5.0 * 2.0 + 13.0 * 6.0) / 2.0);
        assert!(empirical_correlation_matrix(&s, 3).is_err());
    }

    #[test]
    fn wiener_errors() {
        let singular = CorrelationMatrix::toeplitz(&[1.0, 1.0]);
        assert!(matches!(
            wiener_solution(&[0.0, 0.0], &singular, &[1.0, 0.0]),
            Err(Error::SingularMatrix)
        ));
        let r = build_correlation_matrix(1, true);
        assert!(matches!(
            wiener_solution(&[0.0], &r, &[0.0, 0.0]),
            Err(Error::Dimension { .. })
        ));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn decay_factor_below_one_inside_bound(m in 0usize..300, frac in 0.01f64..0.99) {
            let mu = frac * 2.0 * mu_bound_fluctuation(m);
            prop_assert!(fluctuation_decay_factor(mu, m) < 1.0);
        }
    }
}
