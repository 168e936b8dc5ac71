//! Describing an experiment in TOML: a noisy channel, a switched schedule and
//! an explicit step size, run from an inline config.

use std::path::Path;

use chaoticlms::experiment::{run_experiment, ConfigFile, ExperimentConfig};

const CONFIG: &str = r#"
kind = "estimate"
name = "custom"
seed = 42

[defaults]
m = 16
steps = 400
replicates = 4
noise_std = 1e-7
channel = { feedback = [-0.5, 0.25], feedforward = [1.0, 0.3] }

[[run]]
label = "switched"
drive = "chaotic_centered"
switch = [[0, 4.0], [100, 3.9], [200, 4.0]]
mu = 0.3

[[run]]
label = "white"
drive = "gaussian"
mu = "normalized"
"#;

fn main() -> chaoticlms::Result<()> {
    let cfg = ExperimentConfig::from_file(ConfigFile::from_toml_str(CONFIG)?, Path::new("."), None)?;
    for r in run_experiment(&cfg)? {
        let db = r.trace.mma_db();
        print!("{:>9}:", r.label);
        for step in (0..=400).step_by(50) {
            print!(" {:>7.1}", db[step]);
        }
        println!("  dB at steps 0, 50, ..., 400");
    }
    Ok(())
}
