//! Deterministic trajectory-producing runners.
//!
//! Everything is built on the forward-backward operator
//! `T_α(x) = prox_{αg}(x − α∇f(x))`: proximal point and gradient descent are
//! the `f = 0` and `g = 0` specializations, alternating projections is the
//! `f = ½d_A², g = δ_B, α = 1` instance, and averaged projections is either
//! gradient descent on `Σ ½d_{C_i}²` or alternating projections in a product
//! space.

mod projections;
mod prox_grad;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use projections::{
    run_alternating_projections, run_averaged_projections, run_cyclic_projections, AveragedMode,
};
pub use prox_grad::{
    prox_grad_step, run_gradient_descent, run_prox_grad, run_prox_grad_backtracking,
    run_proximal_point, GradientStepRule,
};

/// Stepsize selection for fixed-rule runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepsizeSchedule {
    Fixed {
        alpha: f64,
    },
    /// Explicit `α_0, α_1, …`; the last entry repeats once the list runs out.
    List {
        alphas: Vec<f64>,
    },
    /// `α = fraction / L` for the oracle's Lipschitz bound `L`.
    Auto {
        fraction: f64,
    },
}

impl StepsizeSchedule {
    pub fn validate(&self) -> Result<()> {
        let bad = |a: f64| !(a > 0.0 && a.is_finite());
        match self {
            StepsizeSchedule::Fixed { alpha } if bad(*alpha) => Err(Error::InvalidParameter(
                format!("fixed stepsize must be positive, found {alpha}"),
            )),
            StepsizeSchedule::List { alphas } if alphas.is_empty() => {
                Err(Error::InvalidParameter("stepsize list is empty".into()))
            }
            StepsizeSchedule::List { alphas } => match alphas.iter().find(|a| bad(**a)) {
                Some(a) => Err(Error::InvalidParameter(format!(
                    "stepsizes must be positive, found {a}"
                ))),
                None => Ok(()),
            },
            StepsizeSchedule::Auto { fraction } if bad(*fraction) => Err(Error::InvalidParameter(
                format!("auto fraction must be positive, found {fraction}"),
            )),
            _ => Ok(()),
        }
    }

    /// Stepsize for iteration `k` given the Lipschitz bound.
    pub fn alpha(&self, k: usize, lipschitz: f64) -> f64 {
        match self {
            StepsizeSchedule::Fixed { alpha } => *alpha,
            StepsizeSchedule::List { alphas } => alphas[k.min(alphas.len() - 1)],
            StepsizeSchedule::Auto { fraction } => fraction / lipschitz,
        }
    }
}

/// Termination: at most `max_iters` steps, or as soon as a step is no longer
/// than `step_tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    pub max_iters: usize,
    pub step_tolerance: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_iters: 10_000,
            step_tolerance: 1e-12,
        }
    }
}

impl StopRule {
    pub fn new(max_iters: usize, step_tolerance: f64) -> Result<Self> {
        let rule = StopRule {
            max_iters,
            step_tolerance,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Exactly `max_iters` steps unless an exact fixed point is reached.
    pub fn iterations(max_iters: usize) -> Result<Self> {
        StopRule::new(max_iters, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "max_iters must be at least 1".into(),
            ));
        }
        if !(self.step_tolerance >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step_tolerance must be nonnegative, found {}",
                self.step_tolerance
            )));
        }
        Ok(())
    }
}

/// Parameters of the backtracking line search: every iteration restarts from
/// `alpha_init` and multiplies by `shrink` until the descent test holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BacktrackParams {
    pub alpha_init: f64,
    pub shrink: f64,
    #[serde(default = "default_max_shrinks")]
    pub max_shrinks: usize,
}

fn default_max_shrinks() -> usize {
    60
}

impl BacktrackParams {
    pub fn new(alpha_init: f64, shrink: f64, max_shrinks: usize) -> Result<Self> {
        let p = BacktrackParams {
            alpha_init,
            shrink,
            max_shrinks,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_init > 0.0 && self.alpha_init.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha_init must be positive, found {}",
                self.alpha_init
            )));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "shrink factor must lie in (0, 1), found {}",
                self.shrink
            )));
        }
        if self.max_shrinks == 0 {
            return Err(Error::InvalidParameter(
                "max_shrinks must be at least 1".into(),
            ));
        }
        Ok(())
    }
}
