//! Internal and external clustering validity indices.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dist::compute_distances;
use crate::error::{Error, Result};
use crate::types::{CentroidSet, Dataset, MembershipMatrix};

/// Nearest-center labels, one per sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardPartition {
    pub assign: Vec<usize>,
}

impl HardPartition {
    pub fn new(assign: Vec<usize>, c: usize) -> Result<Self> {
        if assign.iter().any(|&a| a >= c) {
            return Err(Error::Config("partition label out of range".into()));
        }
        Ok(Self { assign })
    }

    /// Nearest-center assignment of every sample.
    pub fn from_centers(data: &Dataset, centers: &CentroidSet) -> Result<Self> {
        let table = compute_distances(data, centers)?;
        Ok(Self { assign: table.nearest })
    }
}

/// `sum_i sum_j u_ij^m d_ij^2`.
pub fn fuzzy_objective(
    data: &Dataset,
    memberships: &MembershipMatrix,
    centers: &CentroidSet,
    m: f64,
) -> Result<f64> {
    let table = compute_distances(data, centers)?;
    let mut total = 0.0;
    for i in 0..centers.c() {
        for j in 0..data.n() {
            let d = table.dist[(i, j)];
            total += memberships.grades()[(i, j)].powf(m) * d * d;
        }
    }
    Ok(total)
}

/// `sum_j ||x_j - v_{assign[j]}||^2`.
pub fn hard_objective(
    data: &Dataset,
    partition: &HardPartition,
    centers: &CentroidSet,
) -> Result<f64> {
    let table = compute_distances(data, centers)?;
    Ok((0..data.n())
        .map(|j| {
            let d = table.dist[(partition.assign[j], j)];
            d * d
        })
        .sum())
}

/// Partition coefficient: `(1/n) sum_ij u_ij^2`.
pub fn pc(memberships: &MembershipMatrix) -> f64 {
    let n = memberships.n() as f64;
    memberships.grades().iter().map(|u| u * u).sum::<f64>() / n
}

/// Davies-Bouldin index with squared scatter and separation terms.
///
/// An empty cluster contributes zero scatter but still participates as a
/// rival; coincident centers make the index undefined.
pub fn dbi(data: &Dataset, partition: &HardPartition, centers: &CentroidSet) -> Result<f64> {
    let c = centers.c();
    let table = compute_distances(data, centers)?;
    let mut scatter = vec![0.0; c];
    let mut count = vec![0usize; c];
    for j in 0..data.n() {
        let i = partition.assign[j];
        let d = table.dist[(i, j)];
        scatter[i] += d * d;
        count[i] += 1;
    }
    for i in 0..c {
        if count[i] > 0 {
            scatter[i] /= count[i] as f64;
        } else {
            log::warn!("dbi: cluster {i} is empty; scatter set to 0");
        }
    }

    let mut total = 0.0;
    for k in 0..c {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..c {
            if i == k {
                continue;
            }
            let sep = crate::dist::euclidean(
                centers.centers.row(i).as_slice().unwrap(),
                centers.centers.row(k).as_slice().unwrap(),
            );
            if sep == 0.0 {
                return Err(Error::Degenerate("dbi: coincident cluster centers".into()));
            }
            let r = (scatter[i] + scatter[k]) / (sep * sep);
            if r > worst {
                worst = r;
            }
        }
        total += worst;
    }
    Ok(total / c as f64)
}

/// Xie-Beni index: fuzzy objective over `n` times the squared minimum
/// center separation.
pub fn xb(
    data: &Dataset,
    memberships: &MembershipMatrix,
    centers: &CentroidSet,
    m: f64,
) -> Result<f64> {
    let c = centers.c();
    let mut min_sep = f64::INFINITY;
    for i in 0..c {
        for k in (i + 1)..c {
            let sep = crate::dist::euclidean(
                centers.centers.row(i).as_slice().unwrap(),
                centers.centers.row(k).as_slice().unwrap(),
            );
            if sep < min_sep {
                min_sep = sep;
            }
        }
    }
    if min_sep == 0.0 {
        return Err(Error::Degenerate("xb: coincident cluster centers".into()));
    }
    let num = fuzzy_objective(data, memberships, centers, m)?;
    Ok(num / (data.n() as f64 * min_sep * min_sep))
}

/// Normalization convention for NMI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NmiNormalization {
    /// Arithmetic mean of the two entropies.
    #[default]
    Arithmetic,
    Geometric,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExternalScores {
    pub f_star: f64,
    pub ari: f64,
    pub nmi: f64,
}

/// Contingency table between predicted clusters and ground-truth labels.
/// Samples labeled `-1` are skipped.
fn contingency(partition: &[usize], labels: &[i64]) -> (Array2<f64>, usize) {
    let mut cluster_ids = BTreeMap::new();
    let mut class_ids = BTreeMap::new();
    let mut pairs = Vec::new();
    for (&a, &l) in partition.iter().zip(labels) {
        if l < 0 {
            continue;
        }
        let nc = cluster_ids.len();
        let ci = *cluster_ids.entry(a).or_insert(nc);
        let nk = class_ids.len();
        let ki = *class_ids.entry(l).or_insert(nk);
        pairs.push((ci, ki));
    }
    let mut table = Array2::zeros((cluster_ids.len(), class_ids.len()));
    for (ci, ki) in &pairs {
        table[(*ci, *ki)] += 1.0;
    }
    (table, pairs.len())
}

/// External agreement scores against ground truth: class-weighted best-match
/// F-measure, adjusted Rand index, and normalized mutual information.
pub fn external_scores(
    partition: &HardPartition,
    labels: &[i64],
    nmi_norm: NmiNormalization,
) -> Result<ExternalScores> {
    if partition.assign.len() != labels.len() {
        return Err(Error::Dimension("partition and labels lengths differ".into()));
    }
    let (table, n) = contingency(&partition.assign, labels);
    if n == 0 {
        return Err(Error::Config("no labeled samples for external scores".into()));
    }
    Ok(ExternalScores {
        f_star: f_star_from_table(&table, n),
        ari: ari_from_table(&table, n),
        nmi: nmi_from_table(&table, n, nmi_norm),
    })
}

fn choose2(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

fn ari_from_table(table: &Array2<f64>, n: usize) -> f64 {
    let a: Vec<f64> = table.rows().into_iter().map(|r| r.sum()).collect();
    let b: Vec<f64> = table.columns().into_iter().map(|c| c.sum()).collect();
    let index: f64 = table.iter().map(|&x| choose2(x)).sum();
    let sum_a: f64 = a.iter().map(|&x| choose2(x)).sum();
    let sum_b: f64 = b.iter().map(|&x| choose2(x)).sum();
    let total = choose2(n as f64);
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected).abs() < 1e-300 {
        // Both partitions are trivially identical (e.g. a single class and
        // a single cluster).
        return 1.0;
    }
    (index - expected) / (max_index - expected)
}

fn nmi_from_table(table: &Array2<f64>, n: usize, norm: NmiNormalization) -> f64 {
    let n = n as f64;
    let a: Vec<f64> = table.rows().into_iter().map(|r| r.sum()).collect();
    let b: Vec<f64> = table.columns().into_iter().map(|c| c.sum()).collect();
    let mut mi = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        for (k, &bk) in b.iter().enumerate() {
            let nik = table[(i, k)];
            if nik > 0.0 {
                mi += (nik / n) * ((n * nik) / (ai * bk)).ln();
            }
        }
    }
    let h = |margins: &[f64]| -> f64 {
        -margins.iter().filter(|&&x| x > 0.0).map(|&x| (x / n) * (x / n).ln()).sum::<f64>()
    };
    let ha = h(&a);
    let hb = h(&b);
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    let denom = match norm {
        NmiNormalization::Arithmetic => 0.5 * (ha + hb),
        NmiNormalization::Geometric => (ha * hb).sqrt(),
        NmiNormalization::Min => ha.min(hb),
        NmiNormalization::Max => ha.max(hb),
    };
    if denom == 0.0 {
        0.0
    } else {
        mi / denom
    }
}

/// `F* = sum_classes (|class|/n) max_clusters F1(class, cluster)`.
fn f_star_from_table(table: &Array2<f64>, n: usize) -> f64 {
    let cluster_sizes: Vec<f64> = table.rows().into_iter().map(|r| r.sum()).collect();
    let class_sizes: Vec<f64> = table.columns().into_iter().map(|c| c.sum()).collect();
    let mut total = 0.0;
    for (k, &class_size) in class_sizes.iter().enumerate() {
        let mut best = 0.0f64;
        for (i, &cluster_size) in cluster_sizes.iter().enumerate() {
            let inter = table[(i, k)];
            if inter == 0.0 {
                continue;
            }
            let precision = inter / cluster_size;
            let recall = inter / class_size;
            let f1 = 2.0 * precision * recall / (precision + recall);
            best = best.max(f1);
        }
        total += class_size / n as f64 * best;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn fuzzy_objective_trivial_cases() {
        let data = Dataset::new(array![[1.0]], None).unwrap();
        let centers = CentroidSet::new(array![[1.0], [3.0]]).unwrap();
        let u = MembershipMatrix::new(array![[1.0], [0.0]]).unwrap();
        assert_eq!(fuzzy_objective(&data, &u, &centers, 2.0).unwrap(), 0.0);

        let u = MembershipMatrix::new(array![[0.0], [1.0]]).unwrap();
        assert!((fuzzy_objective(&data, &u, &centers, 2.0).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn one_hot_fuzzy_equals_hard_for_any_m() {
        let data = Dataset::new(array![[0.0], [2.0], [5.0]], None).unwrap();
        let centers = CentroidSet::new(array![[0.0], [4.0]]).unwrap();
        let part = HardPartition::from_centers(&data, &centers).unwrap();
        let mut grades = Array2::zeros((2, 3));
        for (j, &i) in part.assign.iter().enumerate() {
            grades[(i, j)] = 1.0;
        }
        let u = MembershipMatrix::new(grades).unwrap();
        let hard = hard_objective(&data, &part, &centers).unwrap();
        for m in [1.5, 2.0, 3.0] {
            let fuzzy = fuzzy_objective(&data, &u, &centers, m).unwrap();
            assert!((fuzzy - hard).abs() < 1e-12);
        }
    }

    #[test]
    fn pc_bounds() {
        let one_hot = MembershipMatrix::new(array![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!((pc(&one_hot) - 1.0).abs() < 1e-15);
        let uniform = MembershipMatrix::new(array![[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!((pc(&uniform) - 0.5).abs() < 1e-15);
        let col = MembershipMatrix::new(array![[0.8], [0.2]]).unwrap();
        assert!((pc(&col) - 0.68).abs() < 1e-15);
    }

    #[test]
    fn dbi_zero_scatter_and_degenerate() {
        let data = Dataset::new(array![[0.0], [2.0]], None).unwrap();
        let centers = CentroidSet::new(array![[0.0], [2.0]]).unwrap();
        let part = HardPartition::new(vec![0, 1], 2).unwrap();
        assert_eq!(dbi(&data, &part, &centers).unwrap(), 0.0);

        let coincident = CentroidSet::new(array![[1.0], [1.0]]).unwrap();
        assert!(dbi(&data, &part, &coincident).is_err());
    }

    #[test]
    fn dbi_hand_computation() {
        // Two clusters of two points each, symmetric around their centers.
        let data = Dataset::new(array![[-1.0], [1.0], [9.0], [11.0]], None).unwrap();
        let centers = CentroidSet::new(array![[0.0], [10.0]]).unwrap();
        let part = HardPartition::new(vec![0, 0, 1, 1], 2).unwrap();
        // scatter_i = 1 for both, separation^2 = 100 -> DBI = 2/100.
        let v = dbi(&data, &part, &centers).unwrap();
        assert!((v - 0.02).abs() < 1e-12);
    }

    #[test]
    fn xb_trivial_and_degenerate() {
        let data = Dataset::new(array![[0.0], [2.0]], None).unwrap();
        let centers = CentroidSet::new(array![[0.0], [2.0]]).unwrap();
        let u = MembershipMatrix::new(array![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(xb(&data, &u, &centers, 2.0).unwrap(), 0.0);

        let coincident = CentroidSet::new(array![[1.0], [1.0]]).unwrap();
        assert!(xb(&data, &u, &coincident, 2.0).is_err());
    }

    #[test]
    fn xb_hand_computation() {
        let data = Dataset::new(array![[1.0]], None).unwrap();
        let centers = CentroidSet::new(array![[0.0], [4.0]]).unwrap();
        let u = MembershipMatrix::new(array![[0.9], [0.1]]).unwrap();
        // num = 0.81*1 + 0.01*9 = 0.9; denom = 1 * 16
        let v = xb(&data, &u, &centers, 2.0).unwrap();
        assert!((v - 0.9 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn external_identity_scores_one() {
        let part = HardPartition::new(vec![0, 0, 1, 1, 2, 2], 3).unwrap();
        let labels = vec![0, 0, 1, 1, 2, 2];
        let s = external_scores(&part, &labels, NmiNormalization::Arithmetic).unwrap();
        assert!((s.ari - 1.0).abs() < 1e-12);
        assert!((s.nmi - 1.0).abs() < 1e-12);
        assert!((s.f_star - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_cluster_vs_balanced_classes() {
        let part = HardPartition::new(vec![0, 0, 0, 0], 1).unwrap();
        let labels = vec![0, 0, 1, 1];
        let s = external_scores(&part, &labels, NmiNormalization::Arithmetic).unwrap();
        assert!(s.ari.abs() < 1e-12);
    }

    #[test]
    fn relabeling_invariance() {
        let part = HardPartition::new(vec![0, 0, 1, 1, 2], 3).unwrap();
        let relabeled = HardPartition::new(vec![2, 2, 0, 0, 1], 3).unwrap();
        let labels = vec![0, 1, 1, 1, 2];
        let a = external_scores(&part, &labels, NmiNormalization::Arithmetic).unwrap();
        let b = external_scores(&relabeled, &labels, NmiNormalization::Arithmetic).unwrap();
        assert!((a.ari - b.ari).abs() < 1e-12);
        assert!((a.nmi - b.nmi).abs() < 1e-12);
        assert!((a.f_star - b.f_star).abs() < 1e-12);
    }

    #[test]
    fn noise_labels_are_skipped() {
        let part = HardPartition::new(vec![0, 0, 1, 1, 0], 2).unwrap();
        let labels_full = vec![0, 0, 1, 1, -1];
        let labels_clean = vec![0, 0, 1, 1];
        let part_clean = HardPartition::new(vec![0, 0, 1, 1], 2).unwrap();
        let a = external_scores(&part, &labels_full, NmiNormalization::Arithmetic).unwrap();
        let b = external_scores(&part_clean, &labels_clean, NmiNormalization::Arithmetic).unwrap();
        assert_eq!(a, b);
    }
}
