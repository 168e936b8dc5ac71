use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::config::StatsOptions;
use crate::experiment::output::{write_atomic, write_with, Manifest};
use crate::experiment::svg::{Plot, Series};
use crate::logistic::{
    bifurcation_scan, center, generate_orbit, LambdaSchedule, LogisticParams, Orbit, DEFAULT_BURN_IN, DEFAULT_X0,
};
use crate::sim::seeded_x0;
use crate::stats::{
    centered_moment, empirical_autocorr, empirical_moments, histogram, kummer_moment, quadrature_autocorr,
    quadrature_moment, theoretical_autocorr, theoretical_moment, to_f64, write_report_csv, ReportRow,
};

pub const MOMENT_TOL: f64 = 0.01;
pub const AUTOCORR_TOL: f64 = 0.005;
pub const QUAD_MOMENT_TOL: f64 = 1e-9;
pub const QUAD_AUTOCORR_TOL: f64 = 1e-7;
pub const HISTOGRAM_REL_TOL: f64 = 0.15;
const QUAD_MAX_ORDER: usize = 10;
const BIFURCATION_RANGE: (f64, f64) = (2.8, 4.0);
const BIFURCATION_STEPS: usize = 481;
const BIFURCATION_SETTLE: usize = 1000;
const BIFURCATION_KEEP: usize = 64;

/// One self-check: the largest observed deviation against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone, Default)]
pub struct StatsOutcome {
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl StatsOutcome {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn worst(rows: &[ReportRow]) -> f64 {
    rows.iter().map(ReportRow::abs_error).fold(0.0, f64::max)
}

fn sample_orbit(opts: &StatsOptions) -> Result<Orbit> {
    let x0 = opts.seed.map_or(DEFAULT_X0, seeded_x0);
    let params = LogisticParams::new(opts.lambda, x0, DEFAULT_BURN_IN)?;
    generate_orbit(&params, opts.samples, &LambdaSchedule::Constant(opts.lambda))
}

fn validate(opts: &StatsOptions) -> Result<()> {
    let nothing = opts.moments.is_none()
        && opts.autocorr.is_none()
        && opts.histogram.is_none()
        && !opts.bifurcation
        && !opts.orbit;
    if nothing {
        return Err(Error::Config(
            "nothing to do: request --moments, --autocorr, --histogram, --bifurcation or --orbit".into(),
        ));
    }
    if opts.samples == 0 {
        return Err(Error::Config("--samples must be positive".into()));
    }
    if !(opts.lambda > 0.0 && opts.lambda <= 4.0) {
        return Err(Error::Config(format!("--lambda {} must lie in (0, 4]", opts.lambda)));
    }
    if opts.self_check && opts.lambda != 4.0 {
        return Err(Error::Config(
            "--self-check compares against f4 theory and needs lambda = 4".into(),
        ));
    }
    if let Some(l) = opts.autocorr {
        if l >= opts.samples {
            return Err(Error::Config(format!("--autocorr {l} needs more than {l} samples")));
        }
    }
    if opts.histogram == Some(0) {
        return Err(Error::Config("--histogram needs at least one bin".into()));
    }
    Ok(())
}

/// Statistics of one f_lambda orbit written as `{prefix}_*.csv` under `out`,
/// with the theoretical columns taken from the f4 invariant density.
///
/// Checks are always evaluated; callers decide whether failures matter.
pub fn cmd_stats(opts: &StatsOptions, out: &Path, prefix: &str, plot: bool) -> Result<StatsOutcome> {
    validate(opts)?;
    fs::create_dir_all(out)?;
    let mut res = StatsOutcome::default();
    let needs_orbit = opts.moments.is_some() || opts.autocorr.is_some() || opts.histogram.is_some() || opts.orbit;
    let raw = if needs_orbit { Some(sample_orbit(opts)?) } else { None };
    let analysed = match &raw {
        Some(o) if opts.centered => Some(center(o.clone())?),
        other => other.clone(),
    };
    let path = |what: &str, ext: &str| out.join(format!("{prefix}_{what}.{ext}"));

    if let Some(n) = opts.moments {
        let samples = &analysed.as_ref().unwrap().samples;
        let emp = empirical_moments(samples, n)?;
        let rows: Vec<ReportRow> = (0..=n)
            .map(|nu| ReportRow {
                order_or_lag: nu as usize,
                theoretical: to_f64(&if opts.centered {
                    centered_moment(nu)
                } else {
                    theoretical_moment(nu)
                }),
                empirical: emp[nu as usize],
            })
            .collect();
        res.files
            .push(write_with(&path("moments", "csv"), |b| write_report_csv(&rows, b))?);
        res.checks.push(Check {
            name: "empirical moments".into(),
            worst: worst(&rows),
            tolerance: MOMENT_TOL,
        });
        let quad = (0..=(n as usize).min(QUAD_MAX_ORDER) as u32)
            .map(|nu| (quadrature_moment(nu) - to_f64(&theoretical_moment(nu))).abs())
            .fold(0.0, f64::max);
        res.checks.push(Check {
            name: "quadrature moments".into(),
            worst: quad,
            tolerance: QUAD_MOMENT_TOL,
        });
        let kummer_ok = (0..=n).all(|nu| kummer_moment(nu) == theoretical_moment(nu));
        res.checks.push(Check {
            name: "kummer series moments".into(),
            worst: if kummer_ok { 0.0 } else { f64::INFINITY },
            tolerance: 0.0,
        });
    }

    if let Some(l) = opts.autocorr {
        let est = empirical_autocorr(&analysed.as_ref().unwrap().samples, l)?;
        let rows: Vec<ReportRow> = est
            .values
            .iter()
            .enumerate()
            .map(|(m, &v)| ReportRow {
                order_or_lag: m,
                theoretical: to_f64(&theoretical_autocorr(m as u32, opts.centered)),
                empirical: v,
            })
            .collect();
        res.files
            .push(write_with(&path("autocorr", "csv"), |b| write_report_csv(&rows, b))?);
        res.checks.push(Check {
            name: "empirical autocorrelation".into(),
            worst: worst(&rows),
            tolerance: AUTOCORR_TOL,
        });
        let mut quad = 0.0f64;
        for m in 0..=l.min(QUAD_MAX_ORDER) as u32 {
            quad = quad.max((quadrature_autocorr(m)? - to_f64(&theoretical_autocorr(m, false))).abs());
        }
        res.checks.push(Check {
            name: "quadrature autocorrelation".into(),
            worst: quad,
            tolerance: QUAD_AUTOCORR_TOL,
        });
    }

    if let Some(bins) = opts.histogram {
        let samples = &raw.as_ref().unwrap().samples;
        let h = histogram(samples, bins, (0.0, 1.0), opts.lambda == 4.0)?;
        res.files
            .push(write_with(&path("histogram", "csv"), |b| h.write_csv(b))?);
        if let Some(p) = &h.expected {
            let n = h.total() as f64;
            let rel = h
                .counts
                .iter()
                .zip(p)
                .map(|(&c, &p)| (c as f64 / n - p).abs() / p)
                .fold(0.0, f64::max);
            res.checks.push(Check {
                name: "histogram vs invariant density".into(),
                worst: rel,
                tolerance: HISTOGRAM_REL_TOL,
            });
        }
        if plot {
            let w = (h.hi - h.lo) / bins as f64;
            let n = h.total() as f64;
            let centers = |k: usize| h.edges(k).0 + w / 2.0;
            let mut pl =
                Plot::new(format!("histogram, lambda = {}", opts.lambda), "x", "density").with(Series::scatter(
                    "empirical",
                    (0..bins).map(|k| (centers(k), h.counts[k] as f64 / n / w)).collect(),
                ));
            if let Some(p) = &h.expected {
                pl = pl.with(Series::line(
                    "invariant density",
                    (0..bins).map(|k| (centers(k), p[k] / w)).collect(),
                ));
            }
            let svg = path("histogram", "svg");
            write_atomic(&svg, pl.render().as_bytes())?;
            res.files.push(svg);
        }
    }

    if opts.bifurcation {
        let (lo, hi) = BIFURCATION_RANGE;
        let pts = bifurcation_scan(lo, hi, BIFURCATION_STEPS, BIFURCATION_SETTLE, BIFURCATION_KEEP)?;
        res.files.push(write_with(&path("bifurcation", "csv"), |b| {
            use std::io::Write;
            writeln!(b, "lambda,x")?;
            for (l, x) in &pts {
                writeln!(b, "{l},{x}")?;
            }
            Ok(())
        })?);
        if plot {
            let svg = path("bifurcation", "svg");
            let pl = Plot::new("bifurcation diagram", "lambda", "x").with(Series::scatter("orbit", pts));
            write_atomic(&svg, pl.render().as_bytes())?;
            res.files.push(svg);
        }
    }

    if opts.orbit {
        let o = analysed.as_ref().unwrap();
        res.files.push(write_with(&path("orbit", "csv"), |b| o.write_csv(b))?);
    }

    let config = serde_json::to_value(opts).map_err(|e| Error::Config(e.to_string()))?;
    Manifest::update(out, &res.files, "stats", prefix, &config)?;
    Ok(res)
}
