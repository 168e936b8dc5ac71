//! Composite Gauss-Legendre quadrature of the moment and autocorrelation
//! integrals of the invariant density.
//!
//! Both integrals are taken after the substitution `x = sin^2(theta)`, under
//! which `rho_4(x) dx = (2 / pi) d theta` and the endpoint singularities vanish.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::logistic::map_unchecked;

const NODES: usize = 8;
const MOMENT_TOL: f64 = 1e-12;
const AUTOCORR_TOL: f64 = 1e-8;
const MAX_AUTOCORR_LAG: u32 = 20;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Newton iteration from the Chebyshev-like initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Composite rule with `panels` equal subintervals of `[a, b]`. Panels are
    /// summed left to right, so the result depends only on `panels`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let half = 0.5 * h;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + half * x);
            }
            total += s * half;
        }
        total
    }

    /// Doubles the panel count from `start` until successive estimates agree
    /// to `tol`, returning the finer estimate.
    pub fn integrate_adaptive<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        start: usize,
        max_panels: usize,
        tol: f64,
    ) -> Result<f64> {
        let mut panels = start.max(1);
        let mut prev = self.integrate(&f, a, b, panels);
        let mut delta = f64::INFINITY;
        while panels * 2 <= max_panels {
            panels *= 2;
            let next = self.integrate(&f, a, b, panels);
            delta = (next - prev).abs();
            if delta < tol {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::QuadratureNonConvergence { panels, delta })
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `int_0^1 x^nu rho_4(x) dx = (2 / pi) int_0^(pi/2) sin^(2 nu) theta d theta`.
pub fn quadrature_moment(nu: u32) -> f64 {
    let rule = GaussLegendre::new(NODES);
    let f = |t: f64| t.sin().powi(2 * nu as i32);
    let v = rule
        .integrate_adaptive(f, 0.0, FRAC_PI_2, 8, 1 << 16, MOMENT_TOL)
        .unwrap_or_else(|_| rule.integrate(f, 0.0, FRAC_PI_2, 1 << 16));
    2.0 / PI * v
}

/// `C_4(m) = int_0^1 rho_4(x) x f_4^m(x) dx` with `f_4^m` composed by repeated
/// evaluation of the map.
///
/// The integrand oscillates roughly `2^m` times over the interval, so the
/// starting panel count grows with `m` and lags beyond 20 are rejected.
pub fn quadrature_autocorr(m: u32) -> Result<f64> {
    if m > MAX_AUTOCORR_LAG {
        return Err(Error::Domain(format!(
            "lag {m} exceeds the supported maximum {MAX_AUTOCORR_LAG}"
        )));
    }
    let rule = GaussLegendre::new(NODES);
    let f = |t: f64| {
        let x = t.sin().powi(2);
        let mut y = x;
        for _ in 0..m {
            y = map_unchecked(4.0, y);
        }
        x * y
    };
    let start = 16usize.max(1 << (m + 1));
    let max_panels = start << 8;
    let v = rule.integrate_adaptive(f, 0.0, FRAC_PI_2, start, max_panels, AUTOCORR_TOL)?;
    Ok(2.0 / PI * v)
}
