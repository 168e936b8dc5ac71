use std::io::Write;

use crate::error::{Error, Result};
use crate::stats::density::expected_bin_probability;

/// Sample moments `(1/N) sum x_i^nu` for `nu = 0..=max_nu`.
pub fn empirical_moments(samples: &[f64], max_nu: u32) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sums = vec![0.0; max_nu as usize + 1];
    for &x in samples {
        let mut p = 1.0;
        for s in sums.iter_mut() {
            *s += p;
            p *= x;
        }
    }
    let n = samples.len() as f64;
    Ok(sums.into_iter().map(|s| s / n).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrEstimate {
    pub max_lag: usize,
    pub values: Vec<f64>,
    pub sample_count: usize,
}

/// `C(m) = (1 / (N - m)) sum_i x_i x_(i+m)`, without mean removal.
pub fn empirical_autocorr(samples: &[f64], max_lag: usize) -> Result<AutocorrEstimate> {
    if samples.len() <= max_lag {
        return Err(Error::Length {
            len: samples.len(),
            max_lag,
        });
    }
    let values = (0..=max_lag)
        .map(|m| {
            let s: f64 = samples.iter().zip(&samples[m..]).map(|(a, b)| a * b).sum();
            s / (samples.len() - m) as f64
        })
        .collect();
    Ok(AutocorrEstimate {
        max_lag,
        values,
        sample_count: samples.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    /// Samples outside `[lo, hi]` (including NaN).
    pub overflow: usize,
    /// Per-bin probability under the invariant density, when requested.
    pub expected: Option<Vec<f64>>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn edges(&self, k: usize) -> (f64, f64) {
        let w = (self.hi - self.lo) / self.bins() as f64;
        let lo = self.lo + w * k as f64;
        let hi = if k + 1 == self.bins() { self.hi } else { lo + w };
        (lo, hi)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// CSV `bin_lo,bin_hi,count,expected_probability`; the last column is
    /// empty when no comparison was requested.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "bin_lo,bin_hi,count,expected_probability")?;
        for (k, c) in self.counts.iter().enumerate() {
            let (lo, hi) = self.edges(k);
            match &self.expected {
                Some(p) => writeln!(out, "{lo},{hi},{c},{}", p[k])?,
                None => writeln!(out, "{lo},{hi},{c},")?,
            }
        }
        Ok(())
    }
}

/// Equal-width histogram over `[lo, hi]`; `hi` itself falls in the last bin.
pub fn histogram(samples: &[f64], bins: usize, range: (f64, f64), compare_f4: bool) -> Result<Histogram> {
    let (lo, hi) = range;
    if bins == 0 || !(lo < hi) {
        return Err(Error::Domain(format!(
            "need bins >= 1 and lo < hi, got {bins} bins on [{lo}, {hi}]"
        )));
    }
    let mut counts = vec![0usize; bins];
    let mut overflow = 0;
    let scale = bins as f64 / (hi - lo);
    for &x in samples {
        if !(lo..=hi).contains(&x) {
            overflow += 1;
            continue;
        }
        let k = (((x - lo) * scale) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let mut h = Histogram {
        lo,
        hi,
        counts,
        overflow,
        expected: None,
    };
    if compare_f4 {
        h.expected = Some(
            (0..bins)
                .map(|k| {
                    let (a, b) = h.edges(k);
                    expected_bin_probability(a, b)
                })
                .collect(),
        );
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logistic::{center, LogisticParams};

    #[test]
    fn constant_sequence_moments() {
        assert_eq!(empirical_moments(&[0.5, 0.5], 1).unwrap(), vec![1.0, 0.5]);
        assert!(matches!(empirical_moments(&[], 3), Err(Error::EmptyInput)));
    }

    #[test]
    fn orbit_moments() {
        let orbit = LogisticParams::default().orbit(1_000_000).unwrap();
        let m = empirical_moments(&orbit.samples, 4).unwrap();
        assert!((m[4] - 35.0 / 128.0).abs() < 0.01);
        let c = center(orbit).unwrap();
        let m = empirical_moments(&c.samples, 3).unwrap();
        assert!(m[3].abs() < 0.01);
    }

    #[test]
    fn zero_sequence_autocorr() {
        let est = empirical_autocorr(&[0.0; 20], 5).unwrap();
        assert!(est.values.iter().all(|&v| v == 0.0));
        assert!(matches!(empirical_autocorr(&[0.0; 5], 5), Err(Error::Length { .. })));
    }

    #[test]
    fn orbit_autocorr() {
        let orbit = LogisticParams::default().orbit(1_000_000).unwrap();
        let raw = empirical_autocorr(&orbit.samples, 1).unwrap();
        assert!((raw.values[1] - 0.25).abs() < 0.005);
        let c = center(orbit).unwrap();
        let est = empirical_autocorr(&c.samples, 50).unwrap();
        assert!((est.values[0] - 0.125).abs() < 0.005);
        assert!(est.values[1..].iter().all(|v| v.abs() < 0.005));
    }

    #[test]
    fn histogram_overflow_and_edges() {
        let h = histogram(&[0.0, 0.5, 1.0, 1.5, -0.1, f64::NAN], 2, (0.0, 1.0), true).unwrap();
        assert_eq!(h.counts, vec![1, 2]);
        assert_eq!(h.overflow, 3);
        let p = h.expected.as_ref().unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!(histogram(&[0.1], 0, (0.0, 1.0), false).is_err());
        assert!(histogram(&[0.1], 3, (1.0, 1.0), false).is_err());
    }

    #[test]
    fn orbit_histogram_matches_density() {
        let orbit = LogisticParams::default().orbit(100_000).unwrap();
        let h = histogram(&orbit.samples, 50, (0.0, 1.0), true).unwrap();
        let n = h.total() as f64;
        for (c, p) in h.counts.iter().zip(h.expected.as_ref().unwrap()) {
            let rel = (*c as f64 / n - p).abs() / p;
            assert!(rel < 0.15, "relative deviation {rel}");
        }
    }
}
