//! Bifurcation diagram of the logistic map, written as CSV and SVG.
//!
//! `cargo run --example bifurcation -- [OUT_DIR]`

use std::collections::BTreeSet;
use std::path::PathBuf;

use chaoticlms::experiment::svg::{Plot, Series};
use chaoticlms::experiment::write_atomic;
use chaoticlms::logistic::{bifurcation_column, bifurcation_scan, DEFAULT_X0};

fn main() -> chaoticlms::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    std::fs::create_dir_all(&out)?;

    // number of distinct attractor values shows the period doubling
    for lambda in [2.9, 3.2, 3.5, 3.56, 3.83, 3.95, 4.0] {
        let col = bifurcation_column(lambda, DEFAULT_X0, 5000, 256)?;
        let distinct: BTreeSet<i64> = col.iter().map(|x| (x * 1e6).round() as i64).collect();
        println!("lambda = {lambda:<5} distinct points: {}", distinct.len());
    }

    let pts = bifurcation_scan(2.8, 4.0, 601, 1000, 80)?;
    let mut csv = String::from("lambda,x\n");
    for (l, x) in &pts {
        csv.push_str(&format!("{l},{x}\n"));
    }
    write_atomic(&out.join("bifurcation.csv"), csv.as_bytes())?;
    let svg = Plot::new("logistic map", "lambda", "x").with(Series::scatter("attractor", pts));
    write_atomic(&out.join("bifurcation.svg"), svg.render().as_bytes())?;
    println!("wrote {}/bifurcation.{{csv,svg}}", out.display());
    Ok(())
}
