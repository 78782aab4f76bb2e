//! Friedman test and Nemenyi critical difference for multi-algorithm
//! comparisons across datasets.

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    /// Per-dataset ranks (1 = best), ties averaged.
    pub ranks: Vec<Vec<f64>>,
    /// Mean rank per algorithm.
    pub mean_ranks: Vec<f64>,
    /// Chi-square-based Friedman statistic.
    pub statistic: f64,
    pub p_value: f64,
    /// Whether the null of equal performance is rejected at alpha = 0.05.
    pub significant: bool,
}

/// Ranks a `datasets x algorithms` score matrix and computes the Friedman
/// statistic. `higher_is_better` flips the ranking direction.
pub fn friedman_ranks(scores: &Array2<f64>, higher_is_better: bool) -> Result<FriedmanResult> {
    let (n, k) = scores.dim();
    if n < 2 || k < 2 {
        return Err(Error::Config(format!(
            "friedman test needs at least 2 datasets and 2 algorithms, got {n}x{k}"
        )));
    }
    if scores.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("friedman scores"));
    }

    let mut ranks = Vec::with_capacity(n);
    for row in scores.rows() {
        ranks.push(rank_row(row.as_slice().unwrap(), higher_is_better));
    }

    let mean_ranks: Vec<f64> =
        (0..k).map(|a| ranks.iter().map(|r| r[a]).sum::<f64>() / n as f64).collect();

    let nf = n as f64;
    let kf = k as f64;
    let sum_sq: f64 = mean_ranks.iter().map(|r| r * r).sum();
    let statistic = 12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0);

    let chi = ChiSquared::new(kf - 1.0).expect("k >= 2");
    let p_value = 1.0 - chi.cdf(statistic.max(0.0));

    Ok(FriedmanResult { ranks, mean_ranks, statistic, p_value, significant: p_value < 0.05 })
}

/// Average ranks for one row, 1 = best.
fn rank_row(row: &[f64], higher_is_better: bool) -> Vec<f64> {
    let k = row.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let cmp = row[a].partial_cmp(&row[b]).unwrap();
        if higher_is_better {
            cmp.reverse()
        } else {
            cmp
        }
    });
    let mut ranks = vec![0.0; k];
    let mut pos = 0;
    while pos < k {
        let mut end = pos;
        while end + 1 < k && row[order[end + 1]] == row[order[pos]] {
            end += 1;
        }
        // Ties get the average of the ranks they span.
        let avg = (pos + end) as f64 / 2.0 + 1.0;
        for &idx in &order[pos..=end] {
            ranks[idx] = avg;
        }
        pos = end + 1;
    }
    ranks
}

/// Critical values `q_alpha` for the Nemenyi test: Studentized range
/// quantiles at infinite degrees of freedom divided by sqrt(2), indexed by
/// the number of compared algorithms (2..=20).
const Q_05: [f64; 19] = [
    1.960, 2.344, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
    3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
];
const Q_10: [f64; 19] = [
    1.645, 2.052, 2.291, 2.460, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978, 3.030, 3.077, 3.120,
    3.159, 3.196, 3.230, 3.261, 3.291, 3.319,
];

/// Nemenyi critical difference `CD = q_alpha * sqrt(K(K+1)/(6N))`.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    if !(2..=20).contains(&k) {
        return Err(Error::Config(format!("nemenyi table covers K in [2, 20], got {k}")));
    }
    if n < 1 {
        return Err(Error::Config("nemenyi needs at least one dataset".into()));
    }
    let q = if (alpha - 0.05).abs() < 1e-12 {
        Q_05[k - 2]
    } else if (alpha - 0.10).abs() < 1e-12 {
        Q_10[k - 2]
    } else {
        return Err(Error::Config(format!("unsupported alpha {alpha}; use 0.05 or 0.10")));
    };
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n as f64)).sqrt())
}
