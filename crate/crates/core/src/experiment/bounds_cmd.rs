use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::experiment::output::write_with;
use crate::theory::{analytic_spectrum, fluctuation_decay_factor, mu_bound_fluctuation, mu_bound_mean};

/// Closed-form step-size limits for an `m + 1` tap filter.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub m: usize,
    pub centered: bool,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub sigma: f64,
    /// `2 / lambda_max`.
    pub mu_mean_bound: f64,
    /// `16 / (3 + 2m)`; derived for the zero-mean drive only.
    pub mu_fluct_bound: Option<f64>,
    /// Fluctuation decay factor at `mu_fluct_bound`.
    pub decay_at_mu_max: Option<f64>,
}

pub fn bounds_row(m: usize, centered: bool) -> BoundsRow {
    let s = analytic_spectrum(m, centered);
    let fluct = centered.then(|| mu_bound_fluctuation(m));
    BoundsRow {
        m,
        centered,
        lambda_max: s.lambda_max,
        lambda_min: s.lambda_min,
        sigma: s.sigma,
        mu_mean_bound: mu_bound_mean(m, centered),
        mu_fluct_bound: fluct,
        decay_at_mu_max: fluct.map(|mu| fluctuation_decay_factor(mu, m)),
    }
}

impl BoundsRow {
    pub fn table(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a (uncentered drive)".to_string(), |v| v.to_string());
        let mut s = String::new();
        let drive = if self.centered { "centered" } else { "raw" };
        let _ = writeln!(s, "m = {} ({} taps), {drive} f4 drive", self.m, self.m + 1);
        let _ = writeln!(s, "  lambda_max          {}", self.lambda_max);
        let _ = writeln!(s, "  lambda_min          {}", self.lambda_min);
        let _ = writeln!(s, "  sigma               {}", self.sigma);
        let _ = writeln!(s, "  2/lambda_max        {}", self.mu_mean_bound);
        let _ = writeln!(s, "  16/(3+2m)           {}", opt(self.mu_fluct_bound));
        let _ = writeln!(s, "  decay at mu_max     {}", opt(self.decay_at_mu_max));
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "m,centered,lambda_max,lambda_min,sigma,mu_mean_bound,mu_fluct_bound"
        )?;
        let fluct = self.mu_fluct_bound.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{fluct}",
            self.m, self.centered, self.lambda_max, self.lambda_min, self.sigma, self.mu_mean_bound
        )
    }
}

/// Prints nothing itself; returns the row and writes `bounds_m{m}_{drive}.csv`
/// when `out` is given.
pub fn cmd_bounds(m: usize, centered: bool, out: Option<&Path>) -> Result<BoundsRow> {
    let row = bounds_row(m, centered);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let drive = if centered { "centered" } else { "raw" };
        write_with(&dir.join(format!("bounds_m{m}_{drive}.csv")), |b| row.write_csv(b))?;
    }
    Ok(row)
}
