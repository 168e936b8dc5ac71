//! Sweeps the step size around mu_max and compares the measured convergence
//! with the predicted per-step decay factor.
//!
//! `cargo run --release --example step_size_sweep -- [OUT_DIR]`

use std::path::{Path, PathBuf};

use chaoticlms::experiment::{cmd_estimate, load_preset, ExperimentConfig, MuChoice};
use chaoticlms::sim::StepSize;
use chaoticlms::theory::fluctuation_decay_factor;

fn main() -> chaoticlms::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    let cfg = ExperimentConfig::from_file(load_preset("fig6")?, Path::new("."), None)?;
    let res = cmd_estimate(&cfg, &out, true)?;
    println!(
        "{:>8} {:>12} {:>16} {:>14}",
        "run", "mu", "predicted dB/100", "dB at 2000"
    );
    for (run, r) in cfg.runs.iter().zip(&res.runs) {
        let StepSize::Fixed(mu) = run.mu.resolve(run.m) else {
            unreachable!()
        };
        assert!(matches!(run.mu, MuChoice::Max { .. }));
        let predicted = 1000.0 * fluctuation_decay_factor(mu, run.m).log10();
        let measured = r.trace.db_at(2000).map_or("diverged".into(), |d| format!("{d:.1}"));
        println!("{:>8} {:>12.6} {:>16.2} {:>14}", r.label, mu, predicted, measured);
    }
    Ok(())
}
