//! Chaotic coding of a speech-like signal: lambda_i = 3.95 + 0.05 s_i, compared
//! with driving the filter by the signal itself.
//!
//! `cargo run --release --example speech_modulation -- [OUT_DIR]`

use std::path::{Path, PathBuf};

use chaoticlms::experiment::{cmd_estimate, load_preset, ExperimentConfig};
use chaoticlms::sim::synthetic_speech;

fn main() -> chaoticlms::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    let s = synthetic_speech(8000, 8000);
    let lambdas: Vec<f64> = s.samples.iter().map(|v| 3.95 + 0.05 * v).collect();
    let (lo, hi) = lambdas
        .iter()
        .fold((4.0f64, 0.0f64), |(a, b), l| (a.min(*l), b.max(*l)));
    println!("one second of synthetic speech drives lambda over [{lo:.4}, {hi:.4}]");

    let cfg = ExperimentConfig::from_file(load_preset("fig4")?, Path::new("."), None)?;
    let res = cmd_estimate(&cfg, &out, true)?;
    for r in &res.runs {
        println!(
            "{:>10}: {:>7.1} dB at step 3000",
            r.label,
            r.trace.db_at(3000).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
