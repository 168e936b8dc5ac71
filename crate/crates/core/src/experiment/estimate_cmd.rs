use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiment::config::{ExperimentConfig, RunConfig};
use crate::experiment::output::{write_atomic, write_with, Manifest};
use crate::experiment::svg::{Plot, Series};
use crate::sim::{average_traces, MmaTrace};

/// Averaged trace of one configured run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub label: String,
    pub trace: MmaTrace,
}

#[derive(Debug, Clone)]
pub struct EstimateOutcome {
    pub files: Vec<PathBuf>,
    pub runs: Vec<RunResult>,
}

impl EstimateOutcome {
    pub fn diverged(&self) -> Vec<&RunResult> {
        self.runs.iter().filter(|r| r.trace.diverged()).collect()
    }

    pub fn run(&self, label: &str) -> Option<&MmaTrace> {
        self.runs.iter().find(|r| r.label == label).map(|r| &r.trace)
    }
}

/// Runs every replicate of every run in parallel and averages per run.
/// Results do not depend on thread scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    let jobs: Vec<(usize, usize)> = cfg
        .runs
        .iter()
        .enumerate()
        .flat_map(|(i, r)| (0..r.replicates).map(move |k| (i, k)))
        .collect();
    let traces = jobs
        .par_iter()
        .map(|&(i, k)| cfg.runs[i].estimation(cfg.seed, k)?.run())
        .collect::<Result<Vec<MmaTrace>>>()?;
    let mut rest = traces.as_slice();
    cfg.runs
        .iter()
        .map(|r: &RunConfig| {
            let (mine, tail) = rest.split_at(r.replicates);
            rest = tail;
            let mut trace = average_traces(mine)?;
            trace.meta.seed = cfg.seed;
            Ok(RunResult {
                label: r.label.clone(),
                trace,
            })
        })
        .collect()
}

/// Runs an experiment and writes `{name}_{label}.csv` per run, an optional
/// overlay `{name}.svg` of the dB traces, and the manifest.
pub fn cmd_estimate(cfg: &ExperimentConfig, out: &Path, plot: bool) -> Result<EstimateOutcome> {
    fs::create_dir_all(out)?;
    let runs = run_experiment(cfg)?;
    let mut files = Vec::new();
    for r in &runs {
        let p = out.join(format!("{}_{}.csv", cfg.name, r.label));
        files.push(write_with(&p, |b| r.trace.write_csv(b))?);
        if let Some(step) = r.trace.diverged_at {
            log::warn!("run {} diverged at step {step}", r.label);
        }
    }
    if plot {
        let mut pl = Plot::new(cfg.name.clone(), "iteration", "MMA [dB]");
        for r in &runs {
            let pts = r
                .trace
                .mma_db()
                .into_iter()
                .enumerate()
                .map(|(i, d)| (i as f64, d))
                .collect();
            pl = pl.with(Series::line(r.label.clone(), pts));
        }
        let p = out.join(format!("{}.svg", cfg.name));
        write_atomic(&p, pl.render().as_bytes())?;
        files.push(p);
    }
    for (f, r) in files.iter().zip(&runs) {
        let config = json!({
            "seed": cfg.seed,
            "run": serde_json::to_value(&cfg.runs.iter().find(|c| c.label == r.label).unwrap().spec)
                .map_err(|e| Error::Config(e.to_string()))?,
            "trace": serde_json::to_value(&r.trace.meta).map_err(|e| Error::Config(e.to_string()))?,
            "diverged_at": r.trace.diverged_at,
        });
        Manifest::update(out, std::slice::from_ref(f), "estimate", &cfg.name, &config)?;
    }
    if plot {
        let labels: Vec<&str> = runs.iter().map(|r| r.label.as_str()).collect();
        Manifest::update(
            out,
            std::slice::from_ref(files.last().unwrap()),
            "estimate",
            &cfg.name,
            &json!({ "seed": cfg.seed, "overlay": labels }),
        )?;
    }
    Ok(EstimateOutcome { files, runs })
}
