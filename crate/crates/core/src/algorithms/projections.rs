use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::prox_grad::run_prox_grad_observed;
use super::{run_gradient_descent, GradientStepRule, StepsizeSchedule, StopRule};
use crate::error::{Error, Result};
use crate::oracles::{half_squared_distance, indicator, sum_smooth, ObjectivePair, SharedSmooth};
use crate::point::Point;
use crate::sets::{diagonal_set, product_set, SharedSet};
use crate::trajectory::{Trajectory, TrajectoryBuilder};

/// Alternating projections `y_{k+1} = P_A(x_k)`, `x_{k+1} = P_B(y_{k+1})`.
///
/// Runs as proximal-gradient with `f = ½d_A²`, `g = δ_B` and `α = 1 = 1/L`.
/// Returns the x-sequence (starting at `x0`) and the y-sequence (starting at
/// `y_1`).
pub fn run_alternating_projections(
    a: SharedSet,
    b: SharedSet,
    x0: &Point,
    stop: &StopRule,
) -> Result<(Trajectory, Trajectory)> {
    let pair = ObjectivePair::new(Arc::new(half_squared_distance(a)), Arc::new(indicator(b)))?;
    let mut ys = Vec::new();
    let xs = run_prox_grad_observed(
        &pair,
        x0,
        &StepsizeSchedule::Fixed { alpha: 1.0 },
        stop,
        true,
        "alternating_projections_x",
        |y| ys.push(y.clone()),
    )?;
    let ys = Trajectory::from_points(ys, "alternating_projections_y")?;
    Ok((xs, ys))
}

/// Which of the three equivalent realizations of averaged projections to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragedMode {
    /// `x_{k+1} = (1/n) Σ P_{C_i}(x_k)` literally.
    Direct,
    /// Gradient descent on `Σ ½d_{C_i}²` with `α = 1/n`.
    Gradient,
    /// Alternating projections between `C_1 × … × C_n` and the diagonal.
    Product,
}

impl AveragedMode {
    pub const ALL: [AveragedMode; 3] = [
        AveragedMode::Direct,
        AveragedMode::Gradient,
        AveragedMode::Product,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AveragedMode::Direct => "direct",
            AveragedMode::Gradient => "gradient",
            AveragedMode::Product => "product",
        }
    }
}

fn check_family(sets: &[SharedSet], x0: &Point) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::InvalidParameter("set family is empty".into()));
    }
    for s in sets {
        if s.dim() != x0.dim() {
            return Err(Error::DimensionMismatch {
                expected: x0.dim(),
                found: s.dim(),
            });
        }
    }
    Ok(())
}

/// Fixed-point loop without stepsize or objective metadata.
fn iterate_map<F>(x0: &Point, stop: &StopRule, label: &str, mut map: F) -> Result<Trajectory>
where
    F: FnMut(&Point) -> Result<Point>,
{
    stop.validate()?;
    let mut builder = TrajectoryBuilder::new(x0.clone());
    for k in 0..stop.max_iters {
        let x = builder.last().clone();
        let next = map(&x)?;
        if !next.is_finite() {
            return Err(Error::Diverged { k });
        }
        let moved = next.dist(&x);
        builder.push(next);
        if moved <= stop.step_tolerance {
            break;
        }
    }
    builder.finish(label)
}

/// Averaged projections; every mode returns a trajectory in ℝ^d.
pub fn run_averaged_projections(
    sets: &[SharedSet],
    x0: &Point,
    stop: &StopRule,
    mode: AveragedMode,
) -> Result<Trajectory> {
    check_family(sets, x0)?;
    let n = sets.len();
    let label = format!("averaged_projections_{}", mode.name());
    match mode {
        AveragedMode::Direct => iterate_map(x0, stop, &label, |x| {
            let mut sum = vec![0.0; x.dim()];
            for s in sets {
                for (acc, c) in sum.iter_mut().zip(s.project(x)?.coords()) {
                    *acc += c;
                }
            }
            for acc in &mut sum {
                *acc /= n as f64;
            }
            Ok(Point::from_raw(sum))
        }),
        AveragedMode::Gradient => {
            let terms: Vec<SharedSmooth> = sets
                .iter()
                .map(|s| Arc::new(half_squared_distance(s.clone())) as SharedSmooth)
                .collect();
            let f = Arc::new(sum_smooth(terms)?);
            let rule = GradientStepRule::Schedule {
                schedule: StepsizeSchedule::Fixed {
                    alpha: 1.0 / n as f64,
                },
                enforce_guarantee: true,
            };
            Ok(run_gradient_descent(f, x0, &rule, stop)?.relabeled(label))
        }
        AveragedMode::Product => {
            let diagonal = diagonal_set(x0.dim(), n)?;
            let y0 = diagonal.embed(x0)?;
            let product: SharedSet = Arc::new(product_set(sets.to_vec())?);
            let (stacked, _) = run_alternating_projections(product, Arc::new(diagonal), &y0, stop)?;
            let d = x0.dim();
            let first_blocks = stacked
                .points()
                .iter()
                .map(|y| Point::from_raw(y.coords()[..d].to_vec()))
                .collect();
            Trajectory::from_points(first_blocks, label)
        }
    }
}

/// Cyclic projections `x_{k+1} = P_n ∘ … ∘ P_1 (x_k)`, outer iterates only.
/// Unlike the averaged variant, no self-contraction guarantee is known.
pub fn run_cyclic_projections(
    sets: &[SharedSet],
    x0: &Point,
    stop: &StopRule,
) -> Result<Trajectory> {
    check_family(sets, x0)?;
    iterate_map(x0, stop, "cyclic_projections", |x| {
        sets.iter().try_fold(x.clone(), |y, s| s.project(&y))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::run_proximal_point;
    use crate::sets::{affine_subspace, ball, halfspace};

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn hs(a: &[f64], b: f64) -> SharedSet {
        Arc::new(halfspace(pt(a), b).unwrap())
    }

    #[test]
    fn identical_sets_are_constant_after_one_step() {
        let s: SharedSet = Arc::new(ball(pt(&[1.0, 1.0]), 0.5).unwrap());
        let (xs, ys) = run_alternating_projections(
            s.clone(),
            s,
            &pt(&[3.0, -2.0]),
            &StopRule::iterations(5).unwrap(),
        )
        .unwrap();
        assert!(xs.points()[1..].windows(2).all(|w| w[0] == w[1]));
        assert_eq!(ys.len(), xs.len() - 1);
    }

    #[test]
    fn axis_and_diagonal_meet_at_origin() {
        let axis: SharedSet = Arc::new(affine_subspace(&[vec![0.0, 1.0]], &[0.0]).unwrap());
        let diag: SharedSet = Arc::new(affine_subspace(&[vec![1.0, -1.0]], &[0.0]).unwrap());
        let (xs, ys) = run_alternating_projections(
            axis,
            diag,
            &pt(&[0.0, 1.0]),
            &StopRule::iterations(4).unwrap(),
        )
        .unwrap();
        for p in ys.points().iter().chain(&xs.points()[1..]) {
            assert!(p.norm() < 1e-15, "{p}");
        }
    }

    #[test]
    fn disjoint_halfspaces_alternate() {
        let (xs, ys) = run_alternating_projections(
            hs(&[1.0], 0.0),
            hs(&[-1.0], -1.0),
            &pt(&[0.5]),
            &StopRule::iterations(4).unwrap(),
        )
        .unwrap();
        assert_eq!(ys.points()[0], pt(&[0.0]));
        assert_eq!(xs.points()[1], pt(&[1.0]));
        assert_eq!(ys.points()[1], pt(&[0.0]));
        // Stops once the x-sequence stalls.
        assert_eq!(xs.points().len(), 3);
        assert_eq!(xs.points()[2], pt(&[1.0]));
    }

    #[test]
    fn averaged_two_halfspaces() {
        let sets = vec![hs(&[1.0], 0.0), hs(&[-1.0], -1.0)];
        for mode in AveragedMode::ALL {
            let t = run_averaged_projections(
                &sets,
                &pt(&[0.25]),
                &StopRule::iterations(5).unwrap(),
                mode,
            )
            .unwrap();
            assert_eq!(t.points()[1], pt(&[0.5]), "{mode:?}");
            assert_eq!(t.len(), 3, "{mode:?}");
        }
    }

    #[test]
    fn averaged_feasible_start_is_constant() {
        let sets = vec![hs(&[1.0, 0.0], 1.0), hs(&[0.0, 1.0], 1.0)];
        for mode in AveragedMode::ALL {
            let t = run_averaged_projections(&sets, &pt(&[0.0, 0.0]), &StopRule::default(), mode)
                .unwrap();
            assert_eq!(t.points(), &[pt(&[0.0, 0.0]), pt(&[0.0, 0.0])]);
        }
    }

    #[test]
    fn averaged_rejects_bad_families() {
        assert!(run_averaged_projections(
            &[],
            &pt(&[0.0]),
            &StopRule::default(),
            AveragedMode::Direct
        )
        .is_err());
        let sets = vec![hs(&[1.0, 0.0], 1.0)];
        assert!(run_averaged_projections(
            &sets,
            &pt(&[0.0]),
            &StopRule::default(),
            AveragedMode::Product
        )
        .is_err());
    }

    #[test]
    fn cyclic_single_set_is_proximal_point() {
        let s: SharedSet = Arc::new(ball(pt(&[0.0, 0.0]), 1.0).unwrap());
        let stop = StopRule::iterations(4).unwrap();
        let cyc =
            run_cyclic_projections(std::slice::from_ref(&s), &pt(&[3.0, 4.0]), &stop).unwrap();
        let pp = run_proximal_point(
            Arc::new(indicator(s)),
            &pt(&[3.0, 4.0]),
            &StepsizeSchedule::Fixed { alpha: 1.0 },
            &stop,
        )
        .unwrap();
        assert_eq!(cyc.points(), pp.points());
    }

    #[test]
    fn cyclic_pair_is_alternating_x_sequence() {
        let a: SharedSet = Arc::new(ball(pt(&[0.0, 0.0]), 1.0).unwrap());
        let b = hs(&[1.0, 2.0], -0.5);
        let stop = StopRule::iterations(30).unwrap();
        let x0 = pt(&[2.0, 3.0]);
        let cyc = run_cyclic_projections(&[a.clone(), b.clone()], &x0, &stop).unwrap();
        let (xs, _) = run_alternating_projections(a, b, &x0, &stop).unwrap();
        assert_eq!(cyc.len(), xs.len());
        for (p, q) in cyc.points().iter().zip(xs.points()) {
            assert!(p.dist(q) <= 1e-12);
        }
    }

    #[test]
    fn cyclic_feasible_start_is_constant() {
        let sets = vec![hs(&[1.0], 1.0), hs(&[-1.0], 1.0)];
        let t = run_cyclic_projections(&sets, &pt(&[0.5]), &StopRule::default()).unwrap();
        assert_eq!(t.points(), &[pt(&[0.5]), pt(&[0.5])]);
    }
}
