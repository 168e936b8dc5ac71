//! The `chaoticlms` command line: argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::experiment::{
    cmd_bounds, cmd_estimate, cmd_stats, load_preset, ConfigFile, ExitStatus, ExperimentConfig, ExperimentKind,
    StatsOptions,
};

/// Logistic-map statistics and chaotic-drive LMS experiments.
///
/// Exit codes: 0 ok, 1 self-check mismatch, 2 usage or configuration error,
/// 3 a run diverged. CHAOTICLMS_SEED overrides the master seed.
#[derive(Parser)]
#[command(name = "chaoticlms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments, autocorrelation, histogram and bifurcation reports.
    Stats(StatsArgs),
    /// Channel-estimation experiments from a config file or preset.
    Estimate(EstimateArgs),
    /// Closed-form eigenvalue and step-size bounds.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Start from a stats preset (table1, table2); flags given here override it.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_name = "N")]
    moments: Option<u32>,
    #[arg(long, value_name = "L")]
    autocorr: Option<usize>,
    #[arg(long, value_name = "BINS")]
    histogram: Option<usize>,
    #[arg(long)]
    bifurcation: bool,
    /// Also write the analysed orbit.
    #[arg(long)]
    orbit: bool,
    /// Analyse x - 1/2 instead of x.
    #[arg(long)]
    centered: bool,
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Exit 1 when an estimate misses its oracle tolerance.
    #[arg(long)]
    self_check: bool,
    #[arg(long)]
    no_plot: bool,
}

#[derive(Args)]
struct EstimateArgs {
    /// TOML experiment config.
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Shipped preset: fig3, fig4, fig6.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory [default: the config's `out`, else ./out].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    no_plot: bool,
    /// Exit 0 even if a run diverges.
    #[arg(long)]
    expect_divergence: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    centered: bool,
    /// Also write a CSV into this directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn stats(a: StatsArgs, env_seed: Option<u64>, w: &mut dyn Write) -> Result<ExitStatus, Error> {
    let (mut opts, prefix) = match &a.preset {
        Some(name) => {
            let file = load_preset(name)?;
            if file.kind != ExperimentKind::Stats {
                return Err(Error::Config(format!("{name} is not a stats preset")));
            }
            (file.stats.unwrap_or_default(), file.name)
        }
        None => (StatsOptions::default(), "stats".to_string()),
    };
    opts.moments = a.moments.or(opts.moments);
    opts.autocorr = a.autocorr.or(opts.autocorr);
    opts.histogram = a.histogram.or(opts.histogram);
    opts.bifurcation |= a.bifurcation;
    opts.orbit |= a.orbit;
    opts.centered |= a.centered;
    opts.self_check |= a.self_check;
    opts.samples = a.samples.unwrap_or(opts.samples);
    opts.lambda = a.lambda.unwrap_or(opts.lambda);
    opts.seed = a.seed.or(env_seed).or(opts.seed);

    let res = cmd_stats(&opts, &a.out, &prefix, !a.no_plot)?;
    for f in &res.files {
        writeln!(w, "wrote {}", f.display())?;
    }
    for c in &res.checks {
        let tag = if c.passed() { "ok" } else { "MISMATCH" };
        writeln!(
            w,
            "{tag:>8}  {:<32} worst {:e} (tolerance {:e})",
            c.name, c.worst, c.tolerance
        )?;
    }
    if opts.self_check && res.failed_checks().next().is_some() {
        return Ok(ExitStatus::OracleMismatch);
    }
    Ok(ExitStatus::Success)
}

fn estimate(a: EstimateArgs, env_seed: Option<u64>, w: &mut dyn Write) -> Result<ExitStatus, Error> {
    let (file, base) = match (&a.config, &a.preset) {
        (Some(path), _) => (
            ConfigFile::load(path)?,
            path.parent().unwrap_or(Path::new(".")).to_path_buf(),
        ),
        (None, Some(name)) => (load_preset(name)?, PathBuf::from(".")),
        (None, None) => unreachable!("clap requires a config or a preset"),
    };
    let plot = file.plot.unwrap_or(true) && !a.no_plot;
    let cfg = ExperimentConfig::from_file(file, &base, env_seed)?;
    let out = a
        .out
        .or_else(|| cfg.out.as_ref().map(|o| base.join(o)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let res = cmd_estimate(&cfg, &out, plot)?;
    for f in &res.files {
        writeln!(w, "wrote {}", f.display())?;
    }
    for r in &res.runs {
        let db = r.trace.mma_db();
        writeln!(
            w,
            "{:>16}  final MMA {:.2} dB after {} steps",
            r.label,
            db.last().unwrap(),
            db.len() - 1
        )?;
    }
    let diverged = res.diverged();
    if diverged.is_empty() {
        return Ok(ExitStatus::Success);
    }
    for r in &diverged {
        writeln!(w, "diverged: run {} at step {}", r.label, r.trace.diverged_at.unwrap())?;
    }
    Ok(if a.expect_divergence {
        ExitStatus::Success
    } else {
        ExitStatus::Diverged
    })
}

fn bounds(a: BoundsArgs, w: &mut dyn Write) -> Result<ExitStatus, Error> {
    let row = cmd_bounds(a.m, a.centered, a.out.as_deref())?;
    write!(w, "{}", row.table())?;
    Ok(ExitStatus::Success)
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `w`. `env_seed` overrides every master seed.
pub fn run<I, T>(args: I, env_seed: Option<u64>, w: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitStatus::Usage;
            }
            let _ = write!(w, "{e}");
            return ExitStatus::Success;
        }
    };
    let result = match cli.command {
        Command::Stats(a) => stats(a, env_seed, w),
        Command::Estimate(a) => estimate(a, env_seed, w),
        Command::Bounds(a) => bounds(a, w),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitStatus::from(&e)
    })
}
