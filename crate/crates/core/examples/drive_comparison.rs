//! Reproduces the drive comparison preset: white noise, raw and centered f4,
//! centered f3.95, and a 4 -> 3.95 -> 4 switching run, averaged over seeds.
//!
//! `cargo run --release --example drive_comparison -- [OUT_DIR]`

use std::path::{Path, PathBuf};

use chaoticlms::experiment::{cmd_estimate, load_preset, ExperimentConfig};

fn main() -> chaoticlms::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    let cfg = ExperimentConfig::from_file(load_preset("fig3")?, Path::new("."), None)?;
    let res = cmd_estimate(&cfg, &out, true)?;
    println!("{:>14} {:>9} {:>9} {:>9} {:>9}", "run", "400", "1400", "2000", "3000");
    for r in &res.runs {
        let at = |s| r.trace.db_at(s).map_or(f64::NAN, |d| d);
        println!(
            "{:>14} {:>9.1} {:>9.1} {:>9.1} {:>9.1}",
            r.label,
            at(400),
            at(1400),
            at(2000),
            at(3000)
        );
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
