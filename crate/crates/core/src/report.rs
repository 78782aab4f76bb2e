//! Versioned JSON report schemas for single runs, multi-trial benchmarks,
//! and rank/critical-difference summaries.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::{self, HardPartition, NmiNormalization};
use crate::types::{
    Algorithm, CentroidSet, Dataset, InitMethod, IterationRecord, RunConfig, RunTrace,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceConfig {
    pub m: f64,
    pub eps: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub init: InitMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceMetrics {
    pub pc: f64,
    pub dbi: Option<f64>,
    pub xb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
}

/// Serialized form of one engine run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceReport {
    pub schema: u32,
    pub algorithm: Algorithm,
    pub config: TraceConfig,
    pub iterations: usize,
    pub converged: bool,
    pub per_iteration: Vec<IterationRecord>,
    pub centers: Vec<Vec<f64>>,
    pub metrics: TraceMetrics,
    /// `(t, filtered-sample fraction)` pairs for filter-rate plots.
    pub filter_rate: Vec<(usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage_b_start: Option<usize>,
}

/// Computes the final-state metrics and packages a run trace for emission.
pub fn build_trace_report(
    data: &Dataset,
    cfg: &RunConfig,
    trace: &RunTrace,
) -> Result<TraceReport> {
    let centers = CentroidSet::new(trace.centers.clone())?;
    let partition = HardPartition::from_centers(data, &centers)?;
    let external = match data.labels() {
        Some(labels) if labels.iter().any(|&l| l >= 0) => {
            Some(metrics::external_scores(&partition, labels, NmiNormalization::default())?)
        }
        _ => None,
    };
    let metrics = TraceMetrics {
        pc: metrics::pc(&trace.memberships),
        dbi: metrics::dbi(data, &partition, &centers).ok(),
        xb: metrics::xb(data, &trace.memberships, &centers, cfg.m).ok(),
        f_star: external.map(|e| e.f_star),
        ari: external.map(|e| e.ari),
        nmi: external.map(|e| e.nmi),
    };
    Ok(TraceReport {
        schema: SCHEMA_VERSION,
        algorithm: trace.algorithm,
        config: TraceConfig {
            m: cfg.m,
            eps: cfg.epsilon,
            max_iter: cfg.max_iter,
            seed: cfg.seed,
            init: cfg.init,
        },
        iterations: trace.iterations,
        converged: trace.converged,
        per_iteration: trace.per_iteration.clone(),
        centers: trace.centers.rows().into_iter().map(|r| r.to_vec()).collect(),
        metrics,
        filter_rate: trace.filter_rate(),
        stage_b_start: trace.stage_b_start,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub iterations: usize,
    pub converged: bool,
    pub nanos: u128,
    pub j_fuzzy: f64,
    pub j_hard: f64,
    pub pc: f64,
    pub dbi: Option<f64>,
    pub xb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
}

/// Mean or standard deviation across trials, per metric. Entries are `None`
/// when no trial produced the metric.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricSummary {
    pub iterations: Option<f64>,
    pub nanos: Option<f64>,
    pub j_fuzzy: Option<f64>,
    pub j_hard: Option<f64>,
    pub pc: Option<f64>,
    pub dbi: Option<f64>,
    pub xb: Option<f64>,
    pub f_star: Option<f64>,
    pub ari: Option<f64>,
    pub nmi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgorithmBench {
    pub name: Algorithm,
    pub per_trial: Vec<TrialRecord>,
    pub mean: MetricSummary,
    pub std: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchReport {
    pub schema: u32,
    pub dataset: String,
    pub c: usize,
    pub trials: usize,
    pub algorithms: Vec<AlgorithmBench>,
}

impl BenchReport {
    pub fn algorithm(&self, name: Algorithm) -> Option<&AlgorithmBench> {
        self.algorithms.iter().find(|a| a.name == name)
    }
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (Some(mean), Some(var.sqrt()))
}

pub(crate) fn summarize(trials: &[TrialRecord]) -> (MetricSummary, MetricSummary) {
    let mut mean = MetricSummary::default();
    let mut std = MetricSummary::default();
    let mut set = |field: fn(&mut MetricSummary) -> &mut Option<f64>, values: Vec<f64>| {
        let (m, s) = mean_std(&values);
        *field(&mut mean) = m;
        *field(&mut std) = s;
    };
    set(|s| &mut s.iterations, trials.iter().map(|t| t.iterations as f64).collect());
    set(|s| &mut s.nanos, trials.iter().map(|t| t.nanos as f64).collect());
    set(|s| &mut s.j_fuzzy, trials.iter().map(|t| t.j_fuzzy).collect());
    set(|s| &mut s.j_hard, trials.iter().map(|t| t.j_hard).collect());
    set(|s| &mut s.pc, trials.iter().map(|t| t.pc).collect());
    set(|s| &mut s.dbi, trials.iter().filter_map(|t| t.dbi).collect());
    set(|s| &mut s.xb, trials.iter().filter_map(|t| t.xb).collect());
    set(|s| &mut s.f_star, trials.iter().filter_map(|t| t.f_star).collect());
    set(|s| &mut s.ari, trials.iter().filter_map(|t| t.ari).collect());
    set(|s| &mut s.nmi, trials.iter().filter_map(|t| t.nmi).collect());
    (mean, std)
}

/// Friedman/Nemenyi summary emitted by the rank-comparison command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CdReport {
    pub schema: u32,
    pub metric: String,
    pub alpha: f64,
    pub higher_is_better: bool,
    pub datasets: Vec<String>,
    pub algorithms: Vec<String>,
    pub ranks: Vec<Vec<f64>>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    pub critical_difference: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::preset_d1;
    use crate::engine;

    #[test]
    fn trace_report_roundtrips_through_json() {
        let data = preset_d1(1);
        let mut cfg = RunConfig::new(3, Algorithm::Amfcm);
        cfg.seed = 2;
        let trace = engine::run(&data, &cfg).unwrap();
        let report = build_trace_report(&data, &cfg, &trace).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: TraceReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn summary_handles_missing_metrics() {
        let t = TrialRecord {
            trial: 0,
            seed: 0,
            iterations: 5,
            converged: true,
            nanos: 100,
            j_fuzzy: 1.0,
            j_hard: 2.0,
            pc: 0.5,
            dbi: None,
            xb: None,
            f_star: None,
            ari: None,
            nmi: None,
        };
        let (mean, std) = summarize(&[t]);
        assert_eq!(mean.iterations, Some(5.0));
        assert_eq!(mean.dbi, None);
        assert_eq!(std.pc, Some(0.0));
    }
}
