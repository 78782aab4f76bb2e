//! Command-line front end: dataset generation, single runs with JSON
//! traces, multi-trial benchmarks, and rank statistics over bench reports.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use amfcm_core::bench::{run_benchmark, BenchSpec};
use amfcm_core::datagen::{self, MixtureSpec};
use amfcm_core::report::{build_trace_report, BenchReport, CdReport, MetricSummary, SCHEMA_VERSION};
use amfcm_core::stats;
use amfcm_core::types::{Algorithm, Dataset, InitMethod, RunConfig};
use amfcm_core::{engine, io};

#[derive(Parser)]
#[command(name = "amfcm", version, about = "Fuzzy c-means benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset CSV.
    Gen(GenArgs),
    /// Run one algorithm and write a JSON trace.
    Run(RunArgs),
    /// Benchmark several algorithms over repeated seeded trials.
    Bench(BenchArgs),
    /// Friedman/Nemenyi rank comparison across bench reports.
    Stats(StatsArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Built-in dataset: `d1` (three Gaussians) or `d2` (d1 plus box noise).
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// JSON mixture description (alternative to --preset).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EngineArgs {
    /// Input CSV; a header row with a trailing `label` column is used as
    /// ground truth.
    #[arg(long)]
    data: PathBuf,
    /// Treat the CSV as headerless.
    #[arg(long)]
    no_header: bool,
    /// Number of clusters.
    #[arg(short, long)]
    c: usize,
    /// Fuzzifier (> 1).
    #[arg(short, long, default_value_t = 2.0)]
    m: f64,
    /// Convergence threshold on the center drift.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Center initialization: distinct-sample-draw or random-membership.
    #[arg(long, default_value = "distinct-sample-draw")]
    init: String,
}

impl EngineArgs {
    fn load(&self) -> Result<(Dataset, RunConfig)> {
        let data = io::read_csv(&self.data, !self.no_header)
            .with_context(|| format!("reading {}", self.data.display()))?;
        let mut cfg = RunConfig::new(self.c, Algorithm::Fcm);
        cfg.m = self.m;
        cfg.epsilon = self.eps;
        cfg.max_iter = self.max_iter;
        cfg.seed = self.seed;
        cfg.init = InitMethod::from_str(&self.init)?;
        Ok((data, cfg))
    }
}

#[derive(Args)]
struct RunArgs {
    /// fcm, msfcm, or amfcm.
    #[arg(long)]
    algo: String,
    #[command(flatten)]
    engine: EngineArgs,
    /// Trace JSON output path.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Exit successfully even when max-iter is reached without convergence.
    #[arg(long)]
    allow_maxiter: bool,
    /// Keep wall-clock per-iteration timings in the trace. Off by default
    /// so identical invocations produce byte-identical traces.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Comma-separated algorithm list.
    #[arg(long, default_value = "fcm,msfcm,amfcm")]
    algos: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Report JSON output path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Bench report JSON files, one per dataset.
    #[arg(long, required = true, num_args = 1..)]
    reports: Vec<PathBuf>,
    /// Metric to rank on (iterations, nanos, jFuzzy, jHard, pc, dbi, xb,
    /// fStar, ari, nmi).
    #[arg(long, default_value = "nanos")]
    metric: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Summary JSON output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, json + "\n")
            .with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let dataset = match (&args.preset, &args.spec) {
        (Some(name), None) => match name.as_str() {
            "d1" => datagen::preset_d1(args.seed),
            "d2" => datagen::preset_d2(args.seed),
            other => bail!("unknown preset {other:?}; expected d1 or d2"),
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let spec: MixtureSpec = serde_json::from_str(&text)?;
            datagen::generate_gaussian_mixture(&spec.components, args.seed)?
        }
        _ => bail!("exactly one of --preset or --spec is required"),
    };
    io::write_csv(&dataset, &args.out)?;
    eprintln!("wrote {} samples to {}", dataset.n(), args.out.display());
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let (data, mut cfg) = args.engine.load()?;
    cfg.algorithm = Algorithm::from_str(&args.algo)?;
    let trace = engine::run(&data, &cfg)?;
    let mut report = build_trace_report(&data, &cfg, &trace)?;
    if !args.timing {
        for rec in &mut report.per_iteration {
            rec.nanos = 0;
        }
    }
    write_json(&report, args.trace.as_deref())?;
    eprintln!(
        "{}: {} iterations, {}converged, jFuzzy {:.6}",
        cfg.algorithm,
        trace.iterations,
        if trace.converged { "" } else { "NOT " },
        trace.per_iteration.last().map_or(f64::NAN, |r| r.j_fuzzy),
    );
    if !trace.converged && !args.allow_maxiter {
        bail!("did not converge within {} iterations (use --allow-maxiter)", cfg.max_iter);
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let (data, cfg) = args.engine.load()?;
    let algorithms = args
        .algos
        .split(',')
        .map(|s| Algorithm::from_str(s.trim()))
        .collect::<amfcm_core::Result<Vec<_>>>()?;
    let dataset_name = args
        .engine
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.engine.data.display().to_string());
    let spec = BenchSpec {
        dataset_name,
        algorithms,
        trials: args.trials,
        base_seed: args.engine.seed,
        config: cfg,
    };
    let report = run_benchmark(&data, &spec)?;
    for algo in &report.algorithms {
        eprintln!(
            "{}: mean {:.1} iterations, mean {:.3} ms",
            algo.name,
            algo.mean.iterations.unwrap_or(f64::NAN),
            algo.mean.nanos.unwrap_or(f64::NAN) / 1e6,
        );
    }
    write_json(&report, args.report.as_deref())
}

/// Metric accessor plus ranking direction (true = higher is better).
fn metric_accessor(name: &str) -> Result<(fn(&MetricSummary) -> Option<f64>, bool)> {
    Ok(match name {
        "iterations" => (|s: &MetricSummary| s.iterations, false),
        "nanos" => (|s: &MetricSummary| s.nanos, false),
        "jFuzzy" => (|s: &MetricSummary| s.j_fuzzy, false),
        "jHard" => (|s: &MetricSummary| s.j_hard, false),
        "dbi" => (|s: &MetricSummary| s.dbi, false),
        "xb" => (|s: &MetricSummary| s.xb, false),
        "pc" => (|s: &MetricSummary| s.pc, true),
        "fStar" => (|s: &MetricSummary| s.f_star, true),
        "ari" => (|s: &MetricSummary| s.ari, true),
        "nmi" => (|s: &MetricSummary| s.nmi, true),
        other => bail!("unknown metric {other:?}"),
    })
}

fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let (accessor, higher_is_better) = metric_accessor(&args.metric)?;
    let mut datasets = Vec::new();
    let mut algorithms: Option<Vec<Algorithm>> = None;
    let mut rows = Vec::new();
    for path in &args.reports {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let report: BenchReport = serde_json::from_str(&text)?;
        let names: Vec<Algorithm> = report.algorithms.iter().map(|a| a.name).collect();
        match &algorithms {
            None => algorithms = Some(names),
            Some(expected) if *expected == names => {}
            Some(_) => bail!("{}: algorithm set differs between reports", path.display()),
        }
        let mut row = Vec::new();
        for algo in &report.algorithms {
            row.push(accessor(&algo.mean).with_context(|| {
                format!("{}: metric {} missing for {}", path.display(), args.metric, algo.name)
            })?);
        }
        rows.push(row);
        datasets.push(report.dataset);
    }
    let algorithms = algorithms.expect("reports is non-empty");
    let k = algorithms.len();
    let scores = ndarray::Array2::from_shape_vec(
        (rows.len(), k),
        rows.into_iter().flatten().collect(),
    )?;
    let friedman = stats::friedman_ranks(&scores, higher_is_better)?;
    let cd = stats::nemenyi_cd(k, datasets.len(), args.alpha)?;
    let summary = CdReport {
        schema: SCHEMA_VERSION,
        metric: args.metric.clone(),
        alpha: args.alpha,
        higher_is_better,
        datasets,
        algorithms: algorithms.iter().map(|a| a.to_string()).collect(),
        ranks: friedman.ranks,
        mean_ranks: friedman.mean_ranks,
        statistic: friedman.statistic,
        p_value: friedman.p_value,
        significant: friedman.significant,
        critical_difference: cd,
    };
    write_json(&summary, args.out.as_deref())
}

/// Caps the rayon pool when `AFFCM_THREADS` is set.
fn configure_threads() -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Ok(value) = std::env::var("AFFCM_THREADS") {
        let threads: usize = value
            .parse()
            .with_context(|| format!("AFFCM_THREADS must be a positive integer, got {value:?}"))?;
        if threads == 0 {
            bail!("AFFCM_THREADS must be >= 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads()?;
    let cli = Cli::parse();
    match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Stats(args) => cmd_stats(args),
    }
}
