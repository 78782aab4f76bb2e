//! Property-based invariants for the membership updates and filters.

use ndarray::Array2;
use proptest::prelude::*;

use amfcm_core::dist::{compute_distances, compute_distances_seq};
use amfcm_core::engine::{amfcm, fcm, msfcm};
use amfcm_core::types::{CentroidSet, Dataset};

/// Random instance: `n x p` samples in a box plus `c` centers drawn from a
/// wider box so coincident points stay possible but rare.
fn instance() -> impl Strategy<Value = (Dataset, CentroidSet, f64)> {
    let dims = (2usize..=12, 2usize..=5, 1usize..=4);
    dims.prop_flat_map(|(n, c, p)| {
        let sample = prop::collection::vec(-5.0f64..5.0, n * p);
        let center = prop::collection::vec(-6.0f64..6.0, c * p);
        let m = 1.2f64..4.0;
        (sample, center, m).prop_map(move |(s, v, m)| {
            let data =
                Dataset::new(Array2::from_shape_vec((n, p), s).unwrap(), None).unwrap();
            let centers =
                CentroidSet::new(Array2::from_shape_vec((c, p), v).unwrap()).unwrap();
            (data, centers, m)
        })
    })
}

proptest! {
    #[test]
    fn memberships_are_column_stochastic((data, centers, m) in instance()) {
        let d = compute_distances(&data, &centers).unwrap();
        let u = fcm::update_memberships(&d, m);
        for j in 0..u.n() {
            let s: f64 = u.grades().column(j).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_forms_agree((data, centers, m) in instance()) {
        let d = compute_distances(&data, &centers).unwrap();
        let u = fcm::update_memberships(&d, m);
        let affinity = amfcm::per_center_filter(&d, &centers.displacements);
        let a = amfcm::amfcm_scale(&u, &d, &affinity, m);
        let b = amfcm::amfcm_scale_renormalized(&u, &affinity);
        for (x, y) in a.grades().iter().zip(b.grades().iter()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn global_filter_never_beats_per_center_filter((data, centers, _m) in instance()) {
        // Zero displacements: both filters are at their most permissive.
        let mut d = compute_distances(&data, &centers).unwrap();
        d.ensure_sorted();
        let zero = vec![0.0; centers.c()];
        let global = msfcm::global_filter(&d, &zero);
        let per_center = amfcm::per_center_filter(&d, &zero);
        for &j in &global {
            prop_assert_eq!(per_center.non_affinity[j].len(), centers.c() - 1);
        }
    }

    #[test]
    fn parallel_matches_sequential_bitwise((data, centers, m) in instance()) {
        let d_par = compute_distances(&data, &centers).unwrap();
        let d_seq = compute_distances_seq(&data, &centers).unwrap();
        prop_assert_eq!(&d_par.dist, &d_seq.dist);
        let u_par = fcm::update_memberships(&d_par, m);
        let u_seq = fcm::update_memberships_seq(&d_seq, m);
        prop_assert_eq!(u_par.grades(), u_seq.grades());
    }
}
