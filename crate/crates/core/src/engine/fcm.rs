//! Baseline fuzzy c-means update steps and run loop.

use ndarray::{Array2, ShapeBuilder};

use crate::dist::compute_distances;
use crate::error::Result;
use crate::par;
use crate::types::{
    Algorithm, CentroidSet, Dataset, DistanceTable, MembershipMatrix, RunConfig, RunTrace,
};

/// Denominator threshold below which a cluster is considered empty and is
/// re-seeded.
const EMPTY_CLUSTER_EPS: f64 = 1e-300;

/// Inverse-distance membership update.
///
/// `u_ij = [sum_k (d_ij / d_kj)^(2/(m-1))]^(-1)`. A zero distance sends the
/// whole column to a one-hot on the first zero-distance center.
pub fn update_memberships(distances: &DistanceTable, m: f64) -> MembershipMatrix {
    update_memberships_impl(distances, m, false)
}

/// Single-threaded reference path of [`update_memberships`].
pub fn update_memberships_seq(distances: &DistanceTable, m: f64) -> MembershipMatrix {
    update_memberships_impl(distances, m, true)
}

fn update_memberships_impl(distances: &DistanceTable, m: f64, force_seq: bool) -> MembershipMatrix {
    let c = distances.c();
    let n = distances.n();
    let expo = 2.0 / (m - 1.0);
    let dist = &distances.dist;

    let fill = |j: usize, out: &mut [f64]| {
        let col = dist.column(j);
        if let Some(zero) = col.iter().position(|&d| d == 0.0) {
            out.fill(0.0);
            out[zero] = 1.0;
            return;
        }
        // u_ij = d_ij^(-e) / sum_k d_kj^(-e), algebraically equal to the
        // nested-ratio form but one pass.
        let mut sum = 0.0;
        for (i, &d) in col.iter().enumerate() {
            let w = d.powf(-expo);
            out[i] = w;
            sum += w;
        }
        for u in out.iter_mut() {
            *u /= sum;
        }
    };
    let buf = if force_seq {
        par::fill_per_sample_seq(n, c, fill)
    } else {
        par::fill_per_sample(n, c, fill)
    };
    let grades = Array2::from_shape_vec((c, n).f(), buf).expect("shape matches buffer");
    MembershipMatrix::new(grades).expect("update produces a column-stochastic matrix")
}

/// Weighted-centroid center update: `v_i = sum_j u_ij^m x_j / sum_j u_ij^m`.
///
/// A center whose denominator collapses below `1e-300` is re-seeded at the
/// sample farthest from its current nearest center in `prev`.
pub fn update_centers(
    data: &Dataset,
    memberships: &MembershipMatrix,
    m: f64,
    prev: &CentroidSet,
) -> Result<CentroidSet> {
    let (centers, degenerate) = weighted_centers(data, memberships, m);
    reseed_degenerate(data, centers, degenerate, prev)
}

/// Raw weighted-centroid sums plus the indices of collapsed clusters.
pub(crate) fn weighted_centers(
    data: &Dataset,
    memberships: &MembershipMatrix,
    m: f64,
) -> (Array2<f64>, Vec<usize>) {
    let n = data.n();
    let p = data.p();
    let c = memberships.c();
    let samples = data.samples();
    let u = memberships.grades();

    // Chunked partial sums, folded in chunk order: deterministic under any
    // thread count.
    let partials = par::map_chunks(n, |range| {
        let mut num = vec![0.0; c * p];
        let mut den = vec![0.0; c];
        for j in range {
            let x = samples.row(j);
            for i in 0..c {
                let w = u[(i, j)].powf(m);
                den[i] += w;
                let row = &mut num[i * p..(i + 1) * p];
                for (acc, &xv) in row.iter_mut().zip(x.iter()) {
                    *acc += w * xv;
                }
            }
        }
        (num, den)
    });
    let mut num = vec![0.0; c * p];
    let mut den = vec![0.0; c];
    for (pn, pd) in partials {
        for (a, b) in num.iter_mut().zip(pn) {
            *a += b;
        }
        for (a, b) in den.iter_mut().zip(pd) {
            *a += b;
        }
    }

    let mut centers = Array2::zeros((c, p));
    let mut degenerate = Vec::new();
    for i in 0..c {
        if den[i] < EMPTY_CLUSTER_EPS {
            degenerate.push(i);
            continue;
        }
        for k in 0..p {
            centers[(i, k)] = num[i * p + k] / den[i];
        }
    }
    (centers, degenerate)
}

fn reseed_degenerate(
    data: &Dataset,
    mut centers: Array2<f64>,
    degenerate: Vec<usize>,
    prev: &CentroidSet,
) -> Result<CentroidSet> {
    let n = data.n();
    let p = data.p();
    let samples = data.samples();
    if !degenerate.is_empty() {
        let table = compute_distances(data, prev)?;
        // Worst-covered samples, farthest first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            table.nearest_distance(b).partial_cmp(&table.nearest_distance(a)).unwrap()
        });
        for (slot, i) in degenerate.into_iter().enumerate() {
            let j = order[slot % n];
            for k in 0..p {
                centers[(i, k)] = samples[(j, k)];
            }
        }
    }
    CentroidSet::new(centers)
}

/// Runs plain FCM until the center drift falls below `cfg.epsilon`.
pub fn run_fcm(data: &Dataset, cfg: &RunConfig) -> Result<RunTrace> {
    let mut cfg = cfg.clone();
    cfg.algorithm = Algorithm::Fcm;
    super::driver::run(data, &cfg)
}
