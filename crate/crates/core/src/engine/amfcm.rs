//! Accelerated FCM: per-center affinity filter and zero-and-renormalize
//! membership scaling.

use ndarray::{Array2, ShapeBuilder};

use crate::error::{Error, Result};
use crate::par;
use crate::types::{
    AffinitySets, Algorithm, CentroidSet, Dataset, DistanceTable, MembershipMatrix, RunConfig,
    RunTrace,
};

/// Per-center triangle-inequality filter. Center `i` lands in `P_j` when
/// `d_ij - delta_i >= D_j^(1) + delta_{I*_j}`; the nearest center itself is
/// excluded so the zero-displacement equality case cannot flag it.
pub fn per_center_filter(distances: &DistanceTable, displacements: &[f64]) -> AffinitySets {
    let c = distances.c();
    let non_affinity = (0..distances.n())
        .map(|j| {
            let near = distances.nearest[j];
            let bound = distances.dist[(near, j)] + displacements[near];
            (0..c)
                .filter(|&i| i != near && distances.dist[(i, j)] - displacements[i] >= bound)
                .collect()
        })
        .collect();
    AffinitySets { non_affinity, nearest: distances.nearest.clone() }
}

/// Membership scaling in the truncated-sum form: filtered grades become 0
/// and the rest are the inverse-distance weights restricted to the
/// surviving centers.
pub fn amfcm_scale(
    memberships: &MembershipMatrix,
    distances: &DistanceTable,
    affinity: &AffinitySets,
    m: f64,
) -> MembershipMatrix {
    debug_assert_eq!(memberships.n(), distances.n());
    let c = distances.c();
    let n = distances.n();
    let expo = 2.0 / (m - 1.0);
    let dist = &distances.dist;

    let buf = par::fill_per_sample(n, c, |j, out| {
        let p_j = &affinity.non_affinity[j];
        let keep = |i: usize| !p_j.contains(&i);
        let col = dist.column(j);
        if let Some(zero) = col.iter().enumerate().position(|(i, &d)| d == 0.0 && keep(i)) {
            out.fill(0.0);
            out[zero] = 1.0;
            return;
        }
        let mut sum = 0.0;
        for i in 0..c {
            let w = if keep(i) { col[i].powf(-expo) } else { 0.0 };
            out[i] = w;
            sum += w;
        }
        for u in out.iter_mut() {
            *u /= sum;
        }
    });
    let grades = Array2::from_shape_vec((c, n).f(), buf).expect("shape matches buffer");
    MembershipMatrix::new(grades).expect("scaling keeps columns stochastic")
}

/// Same scaling in the renormalization form: `u_ij / sum_{k not in P_j} u_kj`
/// for surviving centers, 0 otherwise. Kept as an independent algebraic
/// route for cross-checking [`amfcm_scale`].
pub fn amfcm_scale_renormalized(
    memberships: &MembershipMatrix,
    affinity: &AffinitySets,
) -> MembershipMatrix {
    let c = memberships.c();
    let mut grades = memberships.grades().clone();
    for j in 0..memberships.n() {
        let p_j = &affinity.non_affinity[j];
        if p_j.is_empty() {
            continue;
        }
        let kept: f64 = (0..c).filter(|i| !p_j.contains(i)).map(|i| grades[(i, j)]).sum();
        for i in 0..c {
            grades[(i, j)] = if p_j.contains(&i) { 0.0 } else { grades[(i, j)] / kept };
        }
    }
    MembershipMatrix::new(grades).expect("renormalization keeps columns stochastic")
}

/// Concentration factors `alpha_j = 1 / (1 - sum_{i in P_j} u_ij)`, with
/// `alpha_j = 1` for unfiltered samples. The denominator is strictly
/// positive because memberships are column-stochastic and the nearest
/// center is never filtered.
pub fn alpha_factors(memberships: &MembershipMatrix, affinity: &AffinitySets) -> Result<Vec<f64>> {
    let grades = memberships.grades();
    (0..memberships.n())
        .map(|j| {
            let p_j = &affinity.non_affinity[j];
            if p_j.is_empty() {
                return Ok(1.0);
            }
            let filtered_mass: f64 = p_j.iter().map(|&i| grades[(i, j)]).sum();
            if filtered_mass >= 1.0 {
                return Err(Error::Degenerate(format!(
                    "filtered membership mass {filtered_mass} >= 1 for sample {j}"
                )));
            }
            Ok(1.0 / (1.0 - filtered_mass))
        })
        .collect()
}

/// Intermediate products of one AMFCM iteration.
pub struct AmfcmStep {
    pub memberships: MembershipMatrix,
    /// Tentative FCM centers; `displacements` holds the per-center drift.
    pub tentative_centers: CentroidSet,
    pub affinity: AffinitySets,
    pub scaled: MembershipMatrix,
    pub next_centers: CentroidSet,
}

/// One full AMFCM iteration from the distances to the current centers.
pub fn amfcm_step(
    data: &Dataset,
    distances: &DistanceTable,
    centers: &CentroidSet,
    m: f64,
) -> Result<AmfcmStep> {
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
    let affinity = per_center_filter(distances, &displacements);
    let scaled = amfcm_scale(&memberships, distances, &affinity, m);
    let next_centers = super::fcm::update_centers(data, &scaled, m, centers)?;
    Ok(AmfcmStep { memberships, tentative_centers, affinity, scaled, next_centers })
}

/// Runs AMFCM until the center drift falls below `cfg.epsilon`.
pub fn run_amfcm(data: &Dataset, cfg: &RunConfig) -> Result<RunTrace> {
    let mut cfg = cfg.clone();
    cfg.algorithm = Algorithm::Amfcm;
    super::driver::run(data, &cfg)
}
