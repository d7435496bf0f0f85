use std::sync::Arc;

use super::{BacktrackParams, StepsizeSchedule, StopRule};
use crate::error::{Error, Result};
use crate::oracles::{
    zero_proxable, zero_smooth, ObjectivePair, ProxableOracle, SharedProxable, SharedSmooth,
};
use crate::point::Point;
use crate::trajectory::{Trajectory, TrajectoryBuilder};

/// Forward point `x − α∇f(x)`.
fn forward(pair: &ObjectivePair, alpha: f64, x: &Point) -> Result<Point> {
    Ok(x.axpy(-alpha, &pair.f.grad(x)?))
}

/// `T_α(x) = prox_{αg}(x − α∇f(x))`.
pub fn prox_grad_step(pair: &ObjectivePair, alpha: f64, x: &Point) -> Result<Point> {
    x.check_dim(pair.dim())?;
    pair.g.prox(alpha, &forward(pair, alpha, x)?)
}

/// Shared driver: `step` maps `(k, x_k)` to `(α_k, x_{k+1})`.
pub(crate) fn iterate<S>(
    pair: &ObjectivePair,
    x0: &Point,
    stop: &StopRule,
    label: &str,
    mut step: S,
) -> Result<Trajectory>
where
    S: FnMut(usize, &Point) -> Result<(f64, Point)>,
{
    stop.validate()?;
    x0.check_dim(pair.dim())?;
    let mut builder = TrajectoryBuilder::with_metadata(x0.clone(), pair.objective(x0)?.to_f64());
    for k in 0..stop.max_iters {
        let x = builder.last().clone();
        let (alpha, next) = step(k, &x)?;
        if !next.is_finite() {
            return Err(Error::Diverged { k });
        }
        let objective = pair.objective(&next)?.to_f64();
        let moved = next.dist(&x);
        builder.push_step(next, alpha, objective);
        if moved <= stop.step_tolerance {
            break;
        }
    }
    builder.finish(label)
}

/// Fixed-rule forward-backward loop; `on_forward` sees every forward point.
pub(crate) fn run_prox_grad_observed<F>(
    pair: &ObjectivePair,
    x0: &Point,
    schedule: &StepsizeSchedule,
    stop: &StopRule,
    enforce_guarantee: bool,
    label: &str,
    mut on_forward: F,
) -> Result<Trajectory>
where
    F: FnMut(&Point),
{
    schedule.validate()?;
    let lipschitz = pair.f.lipschitz();
    let bound = 1.0 / lipschitz;
    iterate(pair, x0, stop, label, |k, x| {
        let alpha = schedule.alpha(k, lipschitz);
        if enforce_guarantee && alpha > bound {
            return Err(Error::GuaranteeViolated { k, alpha, bound });
        }
        let fwd = forward(pair, alpha, x)?;
        on_forward(&fwd);
        Ok((alpha, pair.g.prox(alpha, &fwd)?))
    })
}

/// Proximal-gradient method `x_{k+1} = T_{α_k}(x_k)`.
///
/// With `enforce_guarantee`, every `α_k` must satisfy `α_k ≤ 1/L` for the
/// stored Lipschitz bound `L`; an offending step aborts the run.
pub fn run_prox_grad(
    pair: &ObjectivePair,
    x0: &Point,
    schedule: &StepsizeSchedule,
    stop: &StopRule,
    enforce_guarantee: bool,
) -> Result<Trajectory> {
    run_prox_grad_observed(
        pair,
        x0,
        schedule,
        stop,
        enforce_guarantee,
        "prox_grad",
        |_| {},
    )
}

/// Proximal-gradient with backtracking: each iteration starts at
/// `alpha_init` and shrinks until
/// `f(T_α(x)) ≤ f(x) + ⟨∇f(x), T_α(x) − x⟩ + ‖T_α(x) − x‖²/(2α)`.
pub fn run_prox_grad_backtracking(
    pair: &ObjectivePair,
    x0: &Point,
    params: &BacktrackParams,
    stop: &StopRule,
) -> Result<Trajectory> {
    backtracking(pair, x0, params, stop, "prox_grad_backtracking")
}

fn backtracking(
    pair: &ObjectivePair,
    x0: &Point,
    params: &BacktrackParams,
    stop: &StopRule,
    label: &str,
) -> Result<Trajectory> {
    params.validate()?;
    iterate(pair, x0, stop, label, |k, x| {
        let fx = pair.f.eval(x)?;
        let gx = pair.f.grad(x)?;
        let mut alpha = params.alpha_init;
        let mut shrinks = 0;
        loop {
            let candidate = pair.g.prox(alpha, &x.axpy(-alpha, &gx))?;
            if sufficient_decrease(pair, x, fx, &gx, &candidate, alpha)? {
                return Ok((alpha, candidate));
            }
            if shrinks == params.max_shrinks {
                return Err(Error::BacktrackingExhausted { k, shrinks, alpha });
            }
            alpha *= params.shrink;
            shrinks += 1;
        }
    })
}

/// Relative size of the rounding noise in `f(T) − f(x) − ⟨∇f(x), T − x⟩`
/// below which the function-value test can no longer be trusted.
const VALUE_TEST_NOISE: f64 = 64.0 * f64::EPSILON;

/// The acceptance test `f(T) ≤ f(x) + ⟨∇f(x), δ⟩ + ‖δ‖²/(2α)`, `δ = T − x`.
///
/// When `‖δ‖²/(2α)` drops below the cancellation noise of the left-hand
/// side, the test additionally requires the curvature form
/// `½⟨∇f(T) − ∇f(x), δ⟩ ≤ ‖δ‖²/(2α)`, which coincides with it for
/// quadratics but suffers no cancellation against `f(x)`.
fn sufficient_decrease(
    pair: &ObjectivePair,
    x: &Point,
    fx: f64,
    gx: &Point,
    candidate: &Point,
    alpha: f64,
) -> Result<bool> {
    let delta = candidate.sub(x);
    let slack = delta.norm_squared() / (2.0 * alpha);
    let linear = gx.dot(&delta);
    let f_next = pair.f.eval(candidate)?;
    if f_next > fx + linear + slack {
        return Ok(false);
    }
    let noise = VALUE_TEST_NOISE * (fx.abs() + f_next.abs() + linear.abs());
    if slack > noise {
        return Ok(true);
    }
    let curvature = 0.5 * pair.f.grad(candidate)?.sub(gx).dot(&delta);
    Ok(curvature <= slack)
}

/// Proximal-point algorithm `x_{k+1} = prox_{α_k g}(x_k)`: the `f = 0` case.
/// Any positive stepsizes are admissible.
pub fn run_proximal_point(
    g: SharedProxable,
    x0: &Point,
    schedule: &StepsizeSchedule,
    stop: &StopRule,
) -> Result<Trajectory> {
    let pair = ObjectivePair::new(Arc::new(zero_smooth(g.dim())?), g)?;
    Ok(run_prox_grad(&pair, x0, schedule, stop, false)?.relabeled("proximal_point"))
}

/// Stepsize rule for gradient descent.
#[derive(Debug, Clone, PartialEq)]
pub enum GradientStepRule {
    Schedule {
        schedule: StepsizeSchedule,
        enforce_guarantee: bool,
    },
    Backtracking(BacktrackParams),
}

/// Steepest descent `x_{k+1} = x_k − α_k∇f(x_k)`: the `g = 0` case.
pub fn run_gradient_descent(
    f: SharedSmooth,
    x0: &Point,
    rule: &GradientStepRule,
    stop: &StopRule,
) -> Result<Trajectory> {
    let g: Arc<dyn ProxableOracle> = Arc::new(zero_proxable(f.dim())?);
    let pair = ObjectivePair::new(f, g)?;
    match rule {
        GradientStepRule::Schedule {
            schedule,
            enforce_guarantee,
        } => Ok(
            run_prox_grad(&pair, x0, schedule, stop, *enforce_guarantee)?
                .relabeled("gradient_descent"),
        ),
        GradientStepRule::Backtracking(params) => {
            backtracking(&pair, x0, params, stop, "gradient_descent_backtracking")
        }
    }
}
