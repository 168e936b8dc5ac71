//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line before asserting.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;

use chaoticlms::experiment::{
    cmd_estimate, cmd_stats, load_preset, run_experiment, ExperimentConfig, ExperimentKind, RunResult,
};
use chaoticlms::logistic::{center, generate_orbit, LambdaSchedule, LogisticParams};
use chaoticlms::sim::{DriveSource, Estimation, IirChannel, MmaTrace, StepSize};
use chaoticlms::stats::{
    centered_moment, empirical_autocorr, empirical_moments, quadrature_autocorr, quadrature_moment, theoretical_moment,
    to_f64,
};
use chaoticlms::theory::{analytic_spectrum, build_correlation_matrix, empirical_fourth_moment_matrix};

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    // Written to the real stdout so the verdict shows even when libtest captures output.
    let line = format!(
        "{} criterion {id:>2} ({title}): {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {id} ({title}) failed: {detail}");
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn f4_orbit(n: usize) -> Vec<f64> {
    generate_orbit(&LogisticParams::default(), n, &LambdaSchedule::Constant(4.0))
        .unwrap()
        .samples
}

fn preset_runs(name: &str) -> Vec<RunResult> {
    let cfg = ExperimentConfig::from_file(load_preset(name).unwrap(), Path::new("."), None).unwrap();
    run_experiment(&cfg).unwrap()
}

fn trace<'a>(runs: &'a [RunResult], label: &str) -> &'a MmaTrace {
    &runs.iter().find(|r| r.label == label).unwrap().trace
}

fn db(t: &MmaTrace, step: usize) -> f64 {
    t.db_at(step).unwrap_or(f64::NAN)
}

/// Least-squares slope of `mma_db` over `lo..=hi`, in dB per step.
fn slope(t: &MmaTrace, lo: usize, hi: usize) -> f64 {
    let y = &t.mma_db()[lo..=hi];
    let n = y.len() as f64;
    let xm = (lo + hi) as f64 / 2.0;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, v) in y.iter().enumerate() {
        let dx = (lo + k) as f64 - xm;
        sxy += dx * (v - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

#[test]
fn criterion_01_exact_moments() {
    let start = Instant::now();
    let table1 = [
        (1, 1),
        (1, 2),
        (3, 8),
        (5, 16),
        (35, 128),
        (63, 256),
        (231, 1024),
        (429, 2048),
    ];
    let table2 = [
        (1, 1),
        (0, 1),
        (1, 8),
        (0, 1),
        (3, 128),
        (0, 1),
        (5, 1024),
        (0, 1),
        (35, 32768),
        (0, 1),
        (63, 262144),
        (0, 1),
        (231, 4194304),
        (0, 1),
        (429, 33554432),
    ];
    let raw_ok = table1
        .iter()
        .enumerate()
        .all(|(nu, &(n, d))| theoretical_moment(nu as u32) == frac(n, d));
    let cen_ok = table2
        .iter()
        .enumerate()
        .all(|(nu, &(n, d))| centered_moment(nu as u32) == frac(n, d));
    let elapsed = start.elapsed();
    verdict(
        1,
        "exact moments",
        raw_ok && cen_ok && elapsed < Duration::from_secs(1),
        format!("raw nu<=7 exact: {raw_ok}, centered nu<=14 exact: {cen_ok}, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_quadrature_oracle() {
    let start = Instant::now();
    let moment_err = (0..=10)
        .map(|nu| (quadrature_moment(nu) - to_f64(&theoretical_moment(nu))).abs())
        .fold(0.0, f64::max);
    let autocorr_err = (0..=10)
        .map(|m| {
            let expected = if m == 0 { 0.375 } else { 0.25 };
            (quadrature_autocorr(m).unwrap() - expected).abs()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    verdict(
        2,
        "quadrature oracle",
        moment_err < 1e-9 && autocorr_err < 1e-7 && elapsed < Duration::from_secs(10),
        format!("max moment error {moment_err:e}, max autocorrelation error {autocorr_err:e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_03_monte_carlo_statistics() {
    let start = Instant::now();
    let x = f4_orbit(1_000_000);
    let emp = empirical_moments(&x, 7).unwrap();
    let moment_err = (0..=7)
        .map(|nu| (emp[nu] - to_f64(&theoretical_moment(nu as u32))).abs())
        .fold(0.0, f64::max);
    let centered: Vec<f64> = x.iter().map(|v| v - 0.5).collect();
    let c = empirical_autocorr(&centered, 50).unwrap().values;
    let lag_max = c[1..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let c0_err = (c[0] - 0.125).abs();
    let elapsed = start.elapsed();
    verdict(
        3,
        "Monte Carlo statistics",
        moment_err < 0.01 && lag_max < 0.005 && c0_err <= 0.005 && elapsed < Duration::from_secs(30),
        format!(
            "max moment error {moment_err:.2e}, max |C(1..50)| {lag_max:.2e}, C(0) = {:.6}, {elapsed:?}",
            c[0]
        ),
    );
}

#[test]
fn criterion_04_eigen_theory() {
    let mut max_err = 0.0f64;
    let mut sigma_raw = Vec::new();
    let mut sigma_centered_ok = true;
    for m in [1usize, 4, 16, 64] {
        for centered in [false, true] {
            let r = build_correlation_matrix(m, centered);
            let dense = DMatrix::from_fn(m + 1, m + 1, |i, j| r.entries[(i, j)]);
            let mut numeric: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
            numeric.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let analytic = analytic_spectrum(m, centered);
            for (a, n) in analytic.eigenvalues.iter().zip(&numeric) {
                max_err = max_err.max((a - n).abs());
            }
            if centered {
                sigma_centered_ok &= analytic.sigma == 1.0;
            } else {
                sigma_raw.push((m, analytic.sigma));
            }
        }
    }
    let sigma_raw_ok = sigma_raw.iter().all(|&(m, s)| s == (2 * m + 1) as f64);
    let raw_list: Vec<String> = sigma_raw.iter().map(|(m, s)| format!("m={m}: {s}")).collect();
    verdict(
        4,
        "eigen-theory",
        max_err < 1e-10 && sigma_raw_ok && sigma_centered_ok,
        format!(
            "max |analytic - numerical| = {max_err:e}; centered sigma = 1: {sigma_centered_ok}; \
             raw sigma = 2m+1 required, got [{}] (the matrix I/8 + 11^T/4 of size m+1 has \
             top eigenvalue (2m+3)/8, so its spread is 2m+3)",
            raw_list.join(", ")
        ),
    );
}

#[test]
fn criterion_05_fourth_moment() {
    let x = center(generate_orbit(&LogisticParams::default(), 1_000_005, &LambdaSchedule::Constant(4.0)).unwrap())
        .unwrap()
        .samples;
    let f = empirical_fourth_moment_matrix(&x, 5).unwrap().entries;
    let (mut diag, mut off) = (0.0f64, 0.0f64);
    for i in 0..6 {
        for j in 0..6 {
            if i == j {
                diag = diag.max((f[(i, j)] - 0.1015625).abs());
            } else {
                off = off.max(f[(i, j)].abs());
            }
        }
    }
    verdict(
        5,
        "fourth-moment matrix",
        diag < 0.01 && off < 0.01,
        format!("max diagonal deviation {diag:.2e}, max off-diagonal {off:.2e}"),
    );
}

#[test]
fn criterion_06_stability_boundary() {
    let start = Instant::now();
    let run = |mu: f64| {
        Estimation {
            drive: DriveSource::ChaoticCentered {
                params: LogisticParams::default(),
                schedule: LambdaSchedule::Constant(4.0),
            },
            channel: IirChannel::reference(),
            m: 128,
            mu: StepSize::Fixed(mu),
            n_steps: 5000,
            noise_std: 0.0,
            seed: 6,
        }
        .run()
        .unwrap()
    };
    let mu_max = 16.0 / 259.0;
    let stable = run(mu_max);
    let unstable = run(3.0 * mu_max);
    let drop = -db(&stable, 5000);
    let elapsed = start.elapsed();
    verdict(
        6,
        "stability boundary",
        !stable.diverged() && drop >= 40.0 && unstable.diverged() && elapsed < Duration::from_secs(60),
        format!(
            "mu_max: {drop:.1} dB below M0 at step 5000; 3 mu_max diverged at step {:?}; {elapsed:?}",
            unstable.diverged_at
        ),
    );
}

#[test]
fn criterion_07_drive_ordering() {
    let runs = preset_runs("fig3");
    let (white, raw, centered) = (
        db(trace(&runs, "white"), 2000),
        db(trace(&runs, "raw"), 2000),
        db(trace(&runs, "centered"), 2000),
    );
    let reps = trace(&runs, "centered").meta.replicates;
    verdict(
        7,
        "drive ordering",
        reps == 8 && raw - centered >= 10.0 && (centered - white).abs() <= 10.0,
        format!("step 2000 over {reps} seeds: white {white:.1} dB, raw {raw:.1} dB, centered {centered:.1} dB"),
    );
}

#[test]
fn criterion_08_switching_degradation() {
    let runs = preset_runs("fig3");
    let t = trace(&runs, "switched");
    let during = slope(t, 500, 1300) * 100.0;
    let after = slope(t, 1500, 2300) * 100.0;
    verdict(
        8,
        "switching degradation",
        !t.diverged() && during > after,
        format!("slope 500-1300 (lambda 3.95) {during:.2} dB/100 steps, 1500-2300 (lambda 4) {after:.2} dB/100 steps"),
    );
}

#[test]
fn criterion_09_mu_sweep() {
    let runs = preset_runs("fig6");
    let at = |label: &str| {
        let t = trace(&runs, label);
        (t.diverged(), db(t, 2000))
    };
    let (q, h, one, big) = (at("mu_0p25"), at("mu_0p5"), at("mu_1"), at("mu_1p5"));
    let stable: Vec<f64> = [q, h, one].iter().filter(|r| !r.0).map(|r| r.1).collect();
    let monotone = stable.windows(2).all(|w| w[1] < w[0]) && !one.0;
    let overshoot = big.0 || big.1 > one.1;
    verdict(
        9,
        "mu sweep",
        monotone && overshoot,
        format!(
            "step 2000: 0.25 mu_max {:.1} dB, 0.5 {:.1} dB, 1.0 {:.1} dB, 1.5 {} ",
            q.1,
            h.1,
            one.1,
            if big.0 {
                "diverged".to_string()
            } else {
                format!("{:.1} dB", big.1)
            }
        ),
    );
}

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn criterion_10_determinism() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        for name in chaoticlms::experiment::preset_names() {
            let file = load_preset(name).unwrap();
            match file.kind {
                ExperimentKind::Estimate => {
                    let cfg = ExperimentConfig::from_file(file, Path::new("."), None).unwrap();
                    cmd_estimate(&cfg, dir.path(), false).unwrap();
                }
                ExperimentKind::Stats => {
                    cmd_stats(&file.stats.unwrap(), dir.path(), &file.name, false).unwrap();
                }
            }
        }
    }
    let (a, b) = (csv_bytes(dirs[0].path()), csv_bytes(dirs[1].path()));
    let identical = !a.is_empty() && a == b;
    verdict(
        10,
        "determinism",
        identical,
        format!(
            "{} preset CSV files compared byte for byte, identical: {identical}",
            a.len()
        ),
    );
}
