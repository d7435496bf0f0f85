use serde::{Deserialize, Serialize};

use super::self_contraction::{check_self_contracted, SelfContractionVerdict};
use crate::error::Result;
use crate::point::Point;
use crate::trajectory::{diameter, length, Trajectory};

/// Largest `d(x_{k+1}, z) − d(x_k, z)`; nonpositive means the trajectory is
/// Fejér-monotone toward `z`. Single-point trajectories give 0.
pub fn check_fejer(t: &Trajectory, z: &Point) -> Result<f64> {
    z.check_dim(t.dim())?;
    let dists: Vec<f64> = t.points().iter().map(|x| x.dist(z)).collect();
    if dists.len() < 2 {
        return Ok(0.0);
    }
    Ok(dists
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Tail sums `Σ_{j ≥ k} ‖x_{j+1} − x_j‖` for `k = 0..=K`; entry 0 is the
/// total length and entry `K` is 0.
pub fn tail_lengths(t: &Trajectory) -> Vec<f64> {
    let steps = t.step_lengths();
    let mut tails = vec![0.0; steps.len() + 1];
    for k in (0..steps.len()).rev() {
        tails[k] = tails[k + 1] + steps[k];
    }
    tails
}

/// Length and distance metrics of a trajectory together with its verdict.
///
/// `distance_x0_to_last` stands in for the distance to the (unknown) limit.
/// `length_diameter_ratio` is the empirical length-to-diameter ratio, 0 when
/// the diameter vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub length: f64,
    pub diameter: f64,
    pub length_diameter_ratio: f64,
    pub distance_x0_to_last: f64,
    #[serde(default)]
    pub distance_x0_to_hint: Option<f64>,
    pub fejer_max_violation: Option<f64>,
    pub self_contraction: SelfContractionVerdict,
}

pub fn report(t: &Trajectory, solution_hint: Option<&Point>, tol: f64) -> Result<TrajectoryReport> {
    let length = length(t);
    let diameter = diameter(t);
    let (distance_x0_to_hint, fejer_max_violation) = match solution_hint {
        Some(z) => (
            Some(crate::point::distance(t.first(), z)?),
            Some(check_fejer(t, z)?),
        ),
        None => (None, None),
    };
    Ok(TrajectoryReport {
        length,
        diameter,
        length_diameter_ratio: if diameter > 0.0 {
            length / diameter
        } else {
            0.0
        },
        distance_x0_to_last: t.first().dist(t.last()),
        distance_x0_to_hint,
        fejer_max_violation,
        self_contraction: check_self_contracted(t, tol)?,
    })
}
