//! Seeded synthetic dataset generation.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::types::Dataset;

/// One Gaussian component with a diagonal covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub mean: Vec<f64>,
    /// Diagonal of the covariance matrix.
    pub variances: Vec<f64>,
    pub count: usize,
}

/// Mixture description accepted from JSON by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<GaussianComponent>,
}

/// Draws a labeled mixture sample. Labels are the component indices, in
/// component order; generation is single-threaded so the stream is fixed by
/// the seed alone.
pub fn generate_gaussian_mixture(spec: &[GaussianComponent], seed: u64) -> Result<Dataset> {
    if spec.is_empty() {
        return Err(Error::Config("mixture needs at least one component".into()));
    }
    let p = spec[0].mean.len();
    if p == 0 {
        return Err(Error::Config("mixture components need at least one dimension".into()));
    }
    for (idx, comp) in spec.iter().enumerate() {
        if comp.mean.len() != p || comp.variances.len() != p {
            return Err(Error::Dimension(format!(
                "component {idx} has inconsistent dimensions"
            )));
        }
        if comp.variances.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Config(format!("component {idx} has nonpositive variance")));
        }
    }
    let n: usize = spec.iter().map(|c| c.count).sum();
    if n == 0 {
        return Err(Error::Config("mixture produces zero samples".into()));
    }

    let mut rng = SeededRng::new(seed);
    let mut samples = Array2::zeros((n, p));
    let mut labels = Vec::with_capacity(n);
    let mut row = 0;
    for (idx, comp) in spec.iter().enumerate() {
        let sd: Vec<f64> = comp.variances.iter().map(|v| v.sqrt()).collect();
        for _ in 0..comp.count {
            for k in 0..p {
                samples[(row, k)] = comp.mean[k] + sd[k] * rng.standard_normal();
            }
            labels.push(idx as i64);
            row += 1;
        }
    }
    Dataset::new(samples, Some(labels))
}

/// The three-cluster 2-d mixture used by the synthetic experiments: 200
/// points per component around (10,10), (13,10) and (11,4).
pub fn d1_components() -> Vec<GaussianComponent> {
    vec![
        GaussianComponent { mean: vec![10.0, 10.0], variances: vec![0.3, 0.3], count: 200 },
        GaussianComponent { mean: vec![13.0, 10.0], variances: vec![0.8, 0.8], count: 200 },
        GaussianComponent { mean: vec![11.0, 4.0], variances: vec![1.2, 1.2], count: 200 },
    ]
}

pub fn preset_d1(seed: u64) -> Dataset {
    generate_gaussian_mixture(&d1_components(), seed).expect("valid preset")
}

/// Number of contaminating samples added by the D2 preset.
pub const D2_NOISE_COUNT: usize = 60;
/// Axis-aligned box the D2 noise is drawn from: the region spanned by the
/// three component means, padded by one unit.
pub const D2_NOISE_BOX: ([f64; 2], [f64; 2]) = ([9.0, 3.0], [14.0, 11.0]);

/// D1 plus 60 uniform box-noise samples labeled `-1`. The first 600 rows
/// are exactly the D1 rows for the same seed; the noise stream continues
/// from the same generator.
pub fn preset_d2(seed: u64) -> Dataset {
    let mut rng = SeededRng::new(seed);
    let d1 = d1_components();
    let n1: usize = d1.iter().map(|c| c.count).sum();
    let n = n1 + D2_NOISE_COUNT;
    let mut samples = Array2::zeros((n, 2));
    let mut labels = Vec::with_capacity(n);
    let mut row = 0;
    for (idx, comp) in d1.iter().enumerate() {
        let sd: Vec<f64> = comp.variances.iter().map(|v| v.sqrt()).collect();
        for _ in 0..comp.count {
            for k in 0..2 {
                samples[(row, k)] = comp.mean[k] + sd[k] * rng.standard_normal();
            }
            labels.push(idx as i64);
            row += 1;
        }
    }
    let (lo, hi) = D2_NOISE_BOX;
    for _ in 0..D2_NOISE_COUNT {
        for k in 0..2 {
            samples[(row, k)] = rng.uniform_in(lo[k], hi[k]);
        }
        labels.push(-1);
        row += 1;
    }
    Dataset::new(samples, Some(labels)).expect("valid preset")
}
