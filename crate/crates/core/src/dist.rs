//! Sample-center distance kernel.

use ndarray::{Array2, ShapeBuilder};

use crate::error::{Error, Result};
use crate::par;
use crate::types::{CentroidSet, Dataset, DistanceTable};

/// Computes the `c x n` Euclidean distance table and, per sample, the index
/// of the nearest center. Ties break to the smallest center index.
pub fn compute_distances(data: &Dataset, centers: &CentroidSet) -> Result<DistanceTable> {
    compute_distances_impl(data, centers, false)
}

/// Single-threaded reference path of [`compute_distances`].
pub fn compute_distances_seq(data: &Dataset, centers: &CentroidSet) -> Result<DistanceTable> {
    compute_distances_impl(data, centers, true)
}

fn compute_distances_impl(
    data: &Dataset,
    centers: &CentroidSet,
    force_seq: bool,
) -> Result<DistanceTable> {
    if data.p() != centers.p() {
        return Err(Error::Dimension(format!(
            "data has {} features but centers have {}",
            data.p(),
            centers.p()
        )));
    }
    let n = data.n();
    let c = centers.c();
    let samples = data.samples();
    let v = &centers.centers;

    let fill = |j: usize, out: &mut [f64]| {
        let x = samples.row(j);
        for (i, d) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (a, b) in x.iter().zip(v.row(i).iter()) {
                let diff = a - b;
                acc += diff * diff;
            }
            *d = acc.sqrt();
        }
    };
    let buf = if force_seq {
        par::fill_per_sample_seq(n, c, fill)
    } else {
        par::fill_per_sample(n, c, fill)
    };
    // Column-major: each per-sample chunk is one column of the c x n table.
    let dist = Array2::from_shape_vec((c, n).f(), buf).expect("shape matches buffer");

    let nearest = (0..n)
        .map(|j| {
            let col = dist.column(j);
            let mut best = 0;
            for i in 1..c {
                if col[i] < col[best] {
                    best = i;
                }
            }
            best
        })
        .collect();

    Ok(DistanceTable { dist, nearest, sorted_per_column: None })
}

/// Euclidean norm of the difference of two equal-length vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Frobenius norm of the elementwise difference of two matrices.
pub fn frobenius_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
