use std::time::Instant;

use crate::dist::{compute_distances, frobenius_diff};
use crate::error::Result;
use crate::init::initialize_centers;
use crate::types::{
    Algorithm, Dataset, IterationRecord, MembershipMatrix, RunConfig, RunTrace,
};

/// Shared alternating-optimization loop. Each iteration computes the
/// memberships from the distances to the current centers, lets the selected
/// algorithm produce the membership matrix that actually drives the center
/// update, then checks the Frobenius drift against `epsilon`.
pub fn run(data: &Dataset, cfg: &RunConfig) -> Result<RunTrace> {
    cfg.validate()?;
    let mut centers = initialize_centers(data, cfg)?;
    let mut distances = compute_distances(data, &centers)?;
    let n = data.n();

    let mut per_iteration = Vec::new();
    let mut converged = false;
    let mut stage_b_start = None;
    let mut last_used: Option<MembershipMatrix> = None;

    for t in 1..=cfg.max_iter {
        let tick = Instant::now();

        let (used, next_centers, filtered_samples, filtered_pairs) = match cfg.algorithm {
            Algorithm::Fcm => {
                let u = super::fcm::update_memberships(&distances, cfg.m);
                let v = super::fcm::update_centers(data, &u, cfg.m, &centers)?;
                (u, v, 0, 0)
            }
            Algorithm::Msfcm => {
                let step = super::msfcm::msfcm_step(data, &distances, &centers, cfg.m)?;
                let ns = step.filtered.len();
                (step.scaled, step.next_centers, ns, ns * (centers.c() - 1))
            }
            Algorithm::Amfcm => {
                let step = super::amfcm::amfcm_step(data, &distances, &centers, cfg.m)?;
                let ns = step.affinity.filtered_sample_count();
                let np = step.affinity.filtered_pair_count();
                (step.scaled, step.next_centers, ns, np)
            }
        };

        let drift = frobenius_diff(&next_centers.centers, &centers.centers);
        let next_distances = compute_distances(data, &next_centers)?;

        // Objectives paired with the memberships that produced these
        // centers; the hard objective uses nearest-center assignment.
        let mut j_fuzzy = 0.0;
        let mut j_hard = 0.0;
        for j in 0..n {
            for i in 0..next_distances.c() {
                let d = next_distances.dist[(i, j)];
                j_fuzzy += used.grades()[(i, j)].powf(cfg.m) * d * d;
            }
            let dn = next_distances.nearest_distance(j);
            j_hard += dn * dn;
        }

        if stage_b_start.is_none() && 2 * filtered_samples >= n {
            stage_b_start = Some(t);
        }
        per_iteration.push(IterationRecord {
            t,
            j_fuzzy,
            j_hard,
            drift,
            filtered_samples,
            filtered_center_pairs: filtered_pairs,
            nanos: tick.elapsed().as_nanos(),
        });

        centers = next_centers;
        distances = next_distances;
        last_used = Some(used);

        if drift < cfg.epsilon {
            converged = true;
            break;
        }
    }

    let iterations = per_iteration.len();
    Ok(RunTrace {
        algorithm: cfg.algorithm,
        per_iteration,
        iterations,
        converged,
        memberships: last_used.expect("max_iter >= 1 guarantees one iteration"),
        centers: centers.centers,
        stage_b_start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn blobs(seed: u64, n_per: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut uni = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let mut rows = Vec::new();
        for (cx, cy) in [(0.0, 0.0), (6.0, 0.0), (3.0, 5.0)] {
            for _ in 0..n_per {
                rows.push([cx + uni() - 0.5, cy + uni() - 0.5]);
            }
        }
        let flat: Vec<f64> = rows.iter().flatten().cloned().collect();
        Dataset::new(Array2::from_shape_vec((rows.len(), 2), flat).unwrap(), None).unwrap()
    }

    #[test]
    fn trace_counters_are_consistent() {
        let data = blobs(9, 30);
        let mut cfg = RunConfig::new(3, Algorithm::Amfcm);
        cfg.seed = 4;
        let trace = run(&data, &cfg).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.iterations, trace.per_iteration.len());
        for (k, rec) in trace.per_iteration.iter().enumerate() {
            assert_eq!(rec.t, k + 1);
            assert!(rec.filtered_samples <= data.n());
            assert!(rec.filtered_center_pairs <= data.n() * 2);
        }
    }

    #[test]
    fn max_iter_reached_is_not_converged() {
        let data = blobs(2, 20);
        let mut cfg = RunConfig::new(3, Algorithm::Fcm);
        cfg.max_iter = 1;
        cfg.epsilon = 1e-15;
        let trace = run(&data, &cfg).unwrap();
        assert!(!trace.converged);
        assert_eq!(trace.iterations, 1);
    }

    #[test]
    fn engines_agree_when_filter_is_disabled() {
        // Huge epsilon is irrelevant here; we compare one synchronized
        // iteration in which the affinity sets are forced empty.
        let data = blobs(5, 15);
        let mut cfg = RunConfig::new(3, Algorithm::Fcm);
        cfg.seed = 8;
        let centers = crate::init::initialize_centers(&data, &cfg).unwrap();
        let distances = compute_distances(&data, &centers).unwrap();
        let u = crate::engine::fcm::update_memberships(&distances, 2.0);
        let fcm_next = crate::engine::fcm::update_centers(&data, &u, 2.0, &centers).unwrap();

        let affinity = crate::types::AffinitySets {
            non_affinity: vec![vec![]; data.n()],
            nearest: distances.nearest.clone(),
        };
        let scaled = crate::engine::amfcm::amfcm_scale(&u, &distances, &affinity, 2.0);
        let amfcm_next =
            crate::engine::fcm::update_centers(&data, &scaled, 2.0, &centers).unwrap();
        for (a, b) in fcm_next.centers.iter().zip(amfcm_next.centers.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_terminates_quickly() {
        let data = blobs(3, 25);
        let mut cfg = RunConfig::new(3, Algorithm::Fcm);
        cfg.seed = 1;
        let first = run(&data, &cfg).unwrap();
        assert!(first.converged);
        // Restarting from the converged centers must stop within one
        // iteration.
        let restart_centers = crate::types::CentroidSet::new(first.centers.clone()).unwrap();
        let d = compute_distances(&data, &restart_centers).unwrap();
        let u = crate::engine::fcm::update_memberships(&d, 2.0);
        let v = crate::engine::fcm::update_centers(&data, &u, 2.0, &restart_centers).unwrap();
        assert!(frobenius_diff(&v.centers, &restart_centers.centers) < cfg.epsilon * 2.0);
    }
}
