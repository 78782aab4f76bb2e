//! Membership-scaling FCM: global triangle-inequality filter plus
//! nearest-grade boosting.

use crate::error::Result;
use crate::types::{
    Algorithm, CentroidSet, Dataset, DistanceTable, MembershipMatrix, RunConfig, RunTrace,
};

/// Samples whose nearest center provably cannot change after one update:
/// `D_j^(2) - max_i delta_i >= D_j^(1) + delta_{I*_j}`.
pub fn global_filter(distances: &DistanceTable, displacements: &[f64]) -> Vec<usize> {
    let max_delta = displacements.iter().cloned().fold(0.0f64, f64::max);
    (0..distances.n())
        .filter(|&j| {
            let near = distances.nearest[j];
            let (d1, d2) = two_smallest(distances, j);
            d2 - max_delta >= d1 + displacements[near]
        })
        .collect()
}

/// Smallest and second-smallest distance in column `j`.
pub(crate) fn two_smallest(distances: &DistanceTable, j: usize) -> (f64, f64) {
    let col = distances.dist.column(j);
    let mut d1 = f64::INFINITY;
    let mut d2 = f64::INFINITY;
    for &d in col.iter() {
        if d < d1 {
            d2 = d1;
            d1 = d;
        } else if d < d2 {
            d2 = d;
        }
    }
    (d1, d2)
}

/// Scales the filtered columns: the nearest grade becomes
/// `M_j = [1 + (c-1)(D_j^(1)/D_j^(c))^(2/(m-1))]^(-1)` and the remaining
/// grades are rescaled by `beta_j = (1 - M_j)/(1 - u_{I*_j})`. A column that
/// is already hard (`u_{I*_j} = 1`) is left unchanged.
pub fn msfcm_scale(
    memberships: &MembershipMatrix,
    distances: &DistanceTable,
    filtered: &[usize],
    m: f64,
) -> MembershipMatrix {
    let c = memberships.c();
    let expo = 2.0 / (m - 1.0);
    let mut grades = memberships.grades().clone();
    for &j in filtered {
        let near = distances.nearest[j];
        let u_near = grades[(near, j)];
        if u_near >= 1.0 {
            continue;
        }
        let d1 = distances.dist[(near, j)];
        let dc = distances.dist.column(j).iter().cloned().fold(0.0f64, f64::max);
        let m_j = 1.0 / (1.0 + (c as f64 - 1.0) * (d1 / dc).powf(expo));
        let beta = (1.0 - m_j) / (1.0 - u_near);
        for i in 0..c {
            grades[(i, j)] = if i == near { m_j } else { beta * grades[(i, j)] };
        }
    }
    MembershipMatrix::new(grades).expect("scaling keeps columns stochastic")
}

/// Runs MSFCM: per iteration the tentative FCM centers give the center
/// displacements, the filter picks the locked samples, and their scaled
/// memberships feed the actual center update.
pub fn run_msfcm(data: &Dataset, cfg: &RunConfig) -> Result<RunTrace> {
    let mut cfg = cfg.clone();
    cfg.algorithm = Algorithm::Msfcm;
    super::driver::run(data, &cfg)
}

/// Intermediate products of one MSFCM iteration.
pub struct MsfcmStep {
    pub memberships: MembershipMatrix,
    /// Tentative FCM centers; `displacements` holds the per-center drift.
    pub tentative_centers: CentroidSet,
    pub filtered: Vec<usize>,
    pub scaled: MembershipMatrix,
    pub next_centers: CentroidSet,
}

/// One full MSFCM iteration from the distances to the current centers.
pub fn msfcm_step(
    data: &Dataset,
    distances: &DistanceTable,
    centers: &CentroidSet,
    m: f64,
) -> Result<MsfcmStep> {
    let memberships = super::fcm::update_memberships(distances, m);
    let tentative = super::fcm::update_centers(data, &memberships, m, centers)?;
    let displacements: Vec<f64> = (0..centers.c())
        .map(|i| {
            crate::dist::euclidean(
                tentative.centers.row(i).as_slice().unwrap(),
                centers.centers.row(i).as_slice().unwrap(),
            )
        })
        .collect();
    let tentative_centers =
        CentroidSet::with_displacements(tentative.centers, displacements.clone())?;
    let filtered = global_filter(distances, &displacements);
    let scaled = msfcm_scale(&memberships, distances, &filtered, m);
    let next_centers = super::fcm::update_centers(data, &scaled, m, centers)?;
    Ok(MsfcmStep { memberships, tentative_centers, filtered, scaled, next_centers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn table(dist: ndarray::Array2<f64>) -> DistanceTable {
        let n = dist.ncols();
        let nearest = (0..n)
            .map(|j| {
                let col = dist.column(j);
                (0..col.len()).min_by(|&a, &b| col[a].partial_cmp(&col[b]).unwrap()).unwrap()
            })
            .collect();
        DistanceTable { dist, nearest, sorted_per_column: None }
    }

    #[test]
    fn zero_displacement_filters_everything() {
        let t = table(array![[1.0, 2.0], [2.0, 1.0], [3.0, 4.0]]);
        assert_eq!(global_filter(&t, &[0.0, 0.0, 0.0]), vec![0, 1]);
    }

    #[test]
    fn tight_bound_excludes_sample() {
        // D2 - max delta = 1.05 < 1.1 = D1 + delta_near
        let t = table(array![[1.0], [1.15], [10.0]]);
        assert!(global_filter(&t, &[0.1, 0.1, 0.1]).is_empty());
    }

    #[test]
    fn huge_displacement_filters_nothing() {
        let t = table(array![[1.0, 2.0], [2.0, 1.0], [3.0, 4.0]]);
        assert!(global_filter(&t, &[1e9, 1e9, 1e9]).is_empty());
    }

    #[test]
    fn nearest_grade_formula() {
        // m=2, c=3, D1/Dc = 0.5 -> M = 1/(1 + 2*0.25) = 2/3
        let t = table(array![[1.0], [1.5], [2.0]]);
        let u = MembershipMatrix::new(array![[0.5], [0.3], [0.2]]).unwrap();
        let scaled = msfcm_scale(&u, &t, &[0], 2.0);
        assert!((scaled.grades()[(0, 0)] - 2.0 / 3.0).abs() < 1e-12);
        let s: f64 = scaled.grades().column(0).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hard_column_left_unchanged() {
        let t = table(array![[0.0], [2.0], [4.0]]);
        let u = MembershipMatrix::new(array![[1.0], [0.0], [0.0]]).unwrap();
        let scaled = msfcm_scale(&u, &t, &[0], 2.0);
        assert_eq!(scaled.grades(), u.grades());
    }

    #[test]
    fn scaled_column_hand_values() {
        // M = 0.8 by construction: (c-1)(D1/Dc)^2 = 0.25 with c=2, ratio 0.5.
        let t = table(array![[1.0], [2.0]]);
        let u = MembershipMatrix::new(array![[0.6], [0.4]]).unwrap();
        let scaled = msfcm_scale(&u, &t, &[0], 2.0);
        assert!((scaled.grades()[(0, 0)] - 0.8).abs() < 1e-12);
        assert!((scaled.grades()[(1, 0)] - 0.2).abs() < 1e-12);
    }
}
