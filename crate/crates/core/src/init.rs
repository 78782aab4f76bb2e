//! Seeded center initialization.

use ndarray::Array2;

use crate::engine::fcm::weighted_centers;
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::types::{CentroidSet, Dataset, InitMethod, MembershipMatrix, RunConfig};

/// Produces the initial centers for a run. Identical seed and config give
/// bit-identical output.
pub fn initialize_centers(data: &Dataset, cfg: &RunConfig) -> Result<CentroidSet> {
    cfg.validate()?;
    let n = data.n();
    let p = data.p();
    let c = cfg.c;
    let mut rng = SeededRng::new(cfg.seed);
    match cfg.init {
        InitMethod::DistinctSampleDraw => {
            if c > n {
                return Err(Error::Config(format!(
                    "distinct-sample-draw needs c <= n, got c={c}, n={n}"
                )));
            }
            let picks = rng.sample_without_replacement(n, c);
            let mut centers = Array2::zeros((c, p));
            for (i, &j) in picks.iter().enumerate() {
                centers.row_mut(i).assign(&data.samples().row(j));
            }
            CentroidSet::new(centers)
        }
        InitMethod::RandomMembership => {
            // Random column-stochastic U^(0), then the weighted-centroid
            // update gives V^(0).
            let mut grades = Array2::zeros((c, n));
            for j in 0..n {
                let mut sum = 0.0;
                for i in 0..c {
                    // Strictly positive so no column can degenerate.
                    let g = rng.uniform() + 1e-12;
                    grades[(i, j)] = g;
                    sum += g;
                }
                for i in 0..c {
                    grades[(i, j)] /= sum;
                }
            }
            let u = MembershipMatrix::new(grades)?;
            let (centers, degenerate) = weighted_centers(data, &u, cfg.m);
            debug_assert!(degenerate.is_empty());
            CentroidSet::new(centers)
        }
    }
}
