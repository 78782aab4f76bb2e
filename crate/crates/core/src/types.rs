//! Shared domain types for the clustering engines.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for the column-sum check of a membership matrix.
pub const DEFAULT_COLUMN_SUM_TOL: f64 = 1e-12;

/// An `n x p` sample matrix with optional ground-truth labels.
///
/// Labels are integers; `-1` marks a sample without a ground-truth class
/// (e.g. injected noise) and such samples are skipped by external metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Array2<f64>,
    labels: Option<Vec<i64>>,
    ids: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(samples: Array2<f64>, labels: Option<Vec<i64>>) -> Result<Self> {
        let (n, p) = samples.dim();
        if n < 1 || p < 1 {
            return Err(Error::Config(format!("dataset must be at least 1x1, got {n}x{p}")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("dataset samples"));
        }
        if let Some(ref l) = labels {
            if l.len() != n {
                return Err(Error::Dimension(format!(
                    "labels length {} does not match sample count {n}",
                    l.len()
                )));
            }
            if l.iter().any(|&v| v < -1) {
                return Err(Error::Config("labels must be >= -1 (-1 marks unlabeled)".into()));
            }
        }
        Ok(Self { samples, labels, ids: None })
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n() {
            return Err(Error::Dimension("ids length does not match sample count".into()));
        }
        self.ids = Some(ids);
        Ok(self)
    }

    pub fn samples(&self) -> &Array2<f64> {
        &self.samples
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    /// Number of samples.
    pub fn n(&self) -> usize {
        self.samples.nrows()
    }

    /// Number of features.
    pub fn p(&self) -> usize {
        self.samples.ncols()
    }
}

/// `c x p` cluster centers plus the per-center displacement of the last
/// tentative update.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    pub centers: Array2<f64>,
    pub displacements: Vec<f64>,
}

impl CentroidSet {
    pub fn new(centers: Array2<f64>) -> Result<Self> {
        let c = centers.nrows();
        if c < 2 {
            return Err(Error::Config(format!("need at least 2 centers, got {c}")));
        }
        if centers.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("cluster centers"));
        }
        Ok(Self { displacements: vec![0.0; c], centers })
    }

    pub fn with_displacements(centers: Array2<f64>, displacements: Vec<f64>) -> Result<Self> {
        let mut s = Self::new(centers)?;
        if displacements.len() != s.c() {
            return Err(Error::Dimension("displacements length does not match center count".into()));
        }
        if displacements.iter().any(|&d| !d.is_finite() || d < 0.0) {
            return Err(Error::NonFinite("center displacements"));
        }
        s.displacements = displacements;
        Ok(s)
    }

    pub fn c(&self) -> usize {
        self.centers.nrows()
    }

    pub fn p(&self) -> usize {
        self.centers.ncols()
    }
}

/// `c x n` column-stochastic fuzzy assignment matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    grades: Array2<f64>,
}

impl MembershipMatrix {
    pub fn new(grades: Array2<f64>) -> Result<Self> {
        Self::with_tolerance(grades, DEFAULT_COLUMN_SUM_TOL)
    }

    pub fn with_tolerance(grades: Array2<f64>, tol: f64) -> Result<Self> {
        if grades.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("membership grades"));
        }
        if grades.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::Config("membership grades must lie in [0, 1]".into()));
        }
        for (j, col) in grades.columns().into_iter().enumerate() {
            let s: f64 = col.sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::Config(format!(
                    "membership column {j} sums to {s}, expected 1 within {tol}"
                )));
            }
        }
        Ok(Self { grades })
    }

    pub fn grades(&self) -> &Array2<f64> {
        &self.grades
    }

    pub fn c(&self) -> usize {
        self.grades.nrows()
    }

    pub fn n(&self) -> usize {
        self.grades.ncols()
    }
}

/// `c x n` table of Euclidean sample-center distances with, per sample,
/// the index of the nearest center (smallest index wins ties).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub dist: Array2<f64>,
    pub nearest: Vec<usize>,
    /// Per-column permutation of `0..c` giving distances in ascending order.
    pub sorted_per_column: Option<Vec<Vec<usize>>>,
}

impl DistanceTable {
    pub fn c(&self) -> usize {
        self.dist.nrows()
    }

    pub fn n(&self) -> usize {
        self.dist.ncols()
    }

    /// Distance of sample `j` to its nearest center.
    pub fn nearest_distance(&self, j: usize) -> f64 {
        self.dist[(self.nearest[j], j)]
    }

    /// Populates `sorted_per_column` (stable sort, ascending distances).
    pub fn ensure_sorted(&mut self) {
        if self.sorted_per_column.is_some() {
            return;
        }
        let c = self.c();
        let sorted = (0..self.n())
            .map(|j| {
                let mut idx: Vec<usize> = (0..c).collect();
                idx.sort_by(|&a, &b| self.dist[(a, j)].partial_cmp(&self.dist[(b, j)]).unwrap());
                idx
            })
            .collect();
        self.sorted_per_column = Some(sorted);
    }

    /// `k`-th smallest distance in column `j` (0-based `k`).
    pub fn ordered_distance(&self, j: usize, k: usize) -> f64 {
        match &self.sorted_per_column {
            Some(s) => self.dist[(s[j][k], j)],
            None => {
                let mut ds: Vec<f64> = self.dist.column(j).to_vec();
                ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
                ds[k]
            }
        }
    }
}

/// Per-sample non-affinity center index sets, paired with each sample's
/// nearest-center index. The nearest center is never a member of its set.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinitySets {
    pub non_affinity: Vec<Vec<usize>>,
    pub nearest: Vec<usize>,
}

impl AffinitySets {
    /// Number of samples with a nonempty non-affinity set.
    pub fn filtered_sample_count(&self) -> usize {
        self.non_affinity.iter().filter(|p| !p.is_empty()).count()
    }

    /// Total number of filtered sample-center pairs.
    pub fn filtered_pair_count(&self) -> usize {
        self.non_affinity.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMethod {
    DistinctSampleDraw,
    RandomMembership,
}

impl std::str::FromStr for InitMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct-sample-draw" => Ok(Self::DistinctSampleDraw),
            "random-membership" => Ok(Self::RandomMembership),
            other => Err(Error::Config(format!("unknown init method: {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Fcm,
    Msfcm,
    Amfcm,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fcm" => Ok(Self::Fcm),
            "msfcm" => Ok(Self::Msfcm),
            "amfcm" => Ok(Self::Amfcm),
            other => Err(Error::Config(format!("unknown algorithm: {other}"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fcm => "fcm",
            Self::Msfcm => "msfcm",
            Self::Amfcm => "amfcm",
        })
    }
}

/// Run parameters shared by all engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub c: usize,
    /// Fuzzifier `m > 1`.
    pub m: f64,
    /// Convergence threshold on the Frobenius norm of the center drift.
    pub epsilon: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub init: InitMethod,
    pub algorithm: Algorithm,
}

impl RunConfig {
    pub fn new(c: usize, algorithm: Algorithm) -> Self {
        Self {
            c,
            m: 2.0,
            epsilon: 1e-6,
            max_iter: 1000,
            seed: 0,
            init: InitMethod::DistinctSampleDraw,
            algorithm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c < 2 {
            return Err(Error::Config("cluster count must be >= 2".into()));
        }
        if !(self.m > 1.0) {
            return Err(Error::Config("fuzzifier m must be > 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be > 0".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::Config("maxIter must be >= 1".into()));
        }
        Ok(())
    }
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IterationRecord {
    /// 1-based iteration counter.
    pub t: usize,
    /// Fuzzy objective paired with the memberships that produced the
    /// iteration's centers.
    pub j_fuzzy: f64,
    /// Hard objective under nearest-center assignment at the new centers.
    pub j_hard: f64,
    /// Frobenius norm of the center drift for this iteration.
    pub drift: f64,
    /// Number of samples with a nonempty non-affinity set.
    pub filtered_samples: usize,
    /// Total filtered sample-center pairs.
    pub filtered_center_pairs: usize,
    pub nanos: u128,
}

/// Full record of one engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub per_iteration: Vec<IterationRecord>,
    pub iterations: usize,
    pub converged: bool,
    pub centers: Array2<f64>,
    /// Memberships used to produce the final centers (the scaled matrix
    /// for MSFCM/AMFCM).
    pub memberships: MembershipMatrix,
    /// First iteration at which at least half the samples had a nonempty
    /// non-affinity set; annotation only.
    pub stage_b_start: Option<usize>,
}

impl RunTrace {
    /// Filter-rate curve `(t, n_filtered_t / n)`.
    pub fn filter_rate(&self) -> Vec<(usize, f64)> {
        let n = self.memberships.n() as f64;
        self.per_iteration
            .iter()
            .map(|r| (r.t, r.filtered_samples as f64 / n))
            .collect()
    }
}
