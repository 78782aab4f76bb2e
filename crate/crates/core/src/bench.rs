//! Multi-trial benchmark harness comparing engines on one dataset.
//!
//! Trial `k` runs every requested algorithm with seed `base_seed + k`, so
//! all algorithms start a trial from the same initialization. Timing is the
//! sum of per-iteration loop times, excluding setup and metric evaluation.

use crate::engine;
use crate::error::Result;
use crate::metrics::{self, HardPartition, NmiNormalization};
use crate::report::{self, AlgorithmBench, BenchReport, TrialRecord, SCHEMA_VERSION};
use crate::types::{Algorithm, CentroidSet, Dataset, RunConfig};

/// Benchmark parameters; `config` carries the shared engine settings
/// (its `seed` and `algorithm` fields are overridden per trial).
#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub dataset_name: String,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub base_seed: u64,
    pub config: RunConfig,
}

fn run_trial(data: &Dataset, cfg: &RunConfig, trial: usize) -> Result<TrialRecord> {
    let trace = engine::run(data, cfg)?;
    let last = trace.per_iteration.last().expect("at least one iteration");
    let nanos: u128 = trace.per_iteration.iter().map(|r| r.nanos).sum();

    let centers = CentroidSet::new(trace.centers.clone())?;
    let partition = HardPartition::from_centers(data, &centers)?;
    let external = match data.labels() {
        Some(labels) if labels.iter().any(|&l| l >= 0) => {
            Some(metrics::external_scores(&partition, labels, NmiNormalization::default())?)
        }
        _ => None,
    };
    Ok(TrialRecord {
        trial,
        seed: cfg.seed,
        iterations: trace.iterations,
        converged: trace.converged,
        nanos,
        j_fuzzy: last.j_fuzzy,
        j_hard: last.j_hard,
        pc: metrics::pc(&trace.memberships),
        dbi: metrics::dbi(data, &partition, &centers).ok(),
        xb: metrics::xb(data, &trace.memberships, &centers, cfg.m).ok(),
        f_star: external.map(|e| e.f_star),
        ari: external.map(|e| e.ari),
        nmi: external.map(|e| e.nmi),
    })
}

pub fn run_benchmark(data: &Dataset, spec: &BenchSpec) -> Result<BenchReport> {
    if spec.trials == 0 {
        return Err(crate::error::Error::Config("benchmark needs at least one trial".into()));
    }
    if spec.algorithms.is_empty() {
        return Err(crate::error::Error::Config(
            "benchmark needs at least one algorithm".into(),
        ));
    }
    let mut algorithms = Vec::with_capacity(spec.algorithms.len());
    for &algo in &spec.algorithms {
        let mut per_trial = Vec::with_capacity(spec.trials);
        for k in 0..spec.trials {
            let mut cfg = spec.config.clone();
            cfg.algorithm = algo;
            cfg.seed = spec.base_seed + k as u64;
            per_trial.push(run_trial(data, &cfg, k)?);
        }
        let (mean, std) = report::summarize(&per_trial);
        algorithms.push(AlgorithmBench { name: algo, per_trial, mean, std });
    }
    Ok(BenchReport {
        schema: SCHEMA_VERSION,
        dataset: spec.dataset_name.clone(),
        c: spec.config.c,
        trials: spec.trials,
        algorithms,
    })
}
