//! Post-hoc audits of the inequalities behind the self-contraction proofs,
//! evaluated on recorded trajectories.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracles::{ExtReal, ObjectivePair};
use crate::point::Point;
use crate::trajectory::{diameter, Trajectory};

/// Largest value of
/// `(g+f)(x⁺) + ‖x⁺ − z‖²/(2α) − (g+f)(z) − ‖x − z‖²/(2α)`
/// over consecutive steps `(x, x⁺) = (x_k, x_{k+1})` with `α = α_k`.
///
/// Test points are `z_samples` seeded uniform draws from the trajectory's
/// bounding box inflated by `2 · diameter`, plus `z = x_k` and the last
/// iterate. Pairs whose right-hand side is `+∞` are skipped. Nonpositive
/// results mean the inequality held everywhere; with no steps the result
/// is `-∞`.
pub fn audit_decrease_lemma(
    pair: &ObjectivePair,
    t: &Trajectory,
    z_samples: usize,
    seed: u64,
) -> Result<f64> {
    audit_decrease_lemma_with(pair, t, z_samples, seed, Execution::default())
}

pub fn audit_decrease_lemma_with(
    pair: &ObjectivePair,
    t: &Trajectory,
    z_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<f64> {
    let alphas = t.stepsizes().ok_or(Error::MissingStepsizes)?;
    t.first().check_dim(pair.dim())?;
    let pts = t.points();

    let mut probes = sample_box(t, z_samples, seed);
    probes.push(t.last().clone());
    let probe_values = probes
        .iter()
        .map(|z| pair.objective(z))
        .collect::<Result<Vec<_>>>()?;
    let point_values = pts
        .iter()
        .map(|x| pair.objective(x))
        .collect::<Result<Vec<_>>>()?;

    let per_step = exec.map(alphas.len(), |k| {
        let (x, next, alpha) = (&pts[k], &pts[k + 1], alphas[k]);
        let own = std::iter::once((x, point_values[k]));
        own.chain(probes.iter().zip(probe_values.iter().copied()))
            .map(|(z, gz)| decrease_gap(point_values[k + 1], gz, x, next, z, alpha))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(per_step.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn decrease_gap(
    value_next: ExtReal,
    value_z: ExtReal,
    x: &Point,
    next: &Point,
    z: &Point,
    alpha: f64,
) -> f64 {
    let ExtReal::Finite(rhs_value) = value_z else {
        return f64::NEG_INFINITY;
    };
    let ExtReal::Finite(lhs_value) = value_next else {
        return f64::INFINITY;
    };
    let lhs = lhs_value + next.dist(z).powi(2) / (2.0 * alpha);
    let rhs = rhs_value + x.dist(z).powi(2) / (2.0 * alpha);
    lhs - rhs
}

fn sample_box(t: &Trajectory, count: usize, seed: u64) -> Vec<Point> {
    let d = t.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in t.points() {
        for i in 0..d {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let diam = diameter(t);
    let margin = if diam > 0.0 { 2.0 * diam } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Point::from_raw(
                (0..d)
                    .map(|i| rng.random_range(lo[i] - margin..=hi[i] + margin))
                    .collect(),
            )
        })
        .collect()
}

/// Largest `f(x_{k+1}) − [f(x_k) + ⟨∇f(x_k), x_{k+1} − x_k⟩ + ‖x_{k+1} − x_k‖²/(2α_k)]`:
/// the backtracking acceptance test replayed on the recorded steps.
pub fn audit_backtracking(pair: &ObjectivePair, t: &Trajectory) -> Result<f64> {
    let alphas = t.stepsizes().ok_or(Error::MissingStepsizes)?;
    t.first().check_dim(pair.dim())?;
    let mut worst = f64::NEG_INFINITY;
    for (k, w) in t.points().windows(2).enumerate() {
        let (x, next) = (&w[0], &w[1]);
        let step = next.sub(x);
        let model =
            pair.f.eval(x)? + pair.f.grad(x)?.dot(&step) + step.norm_squared() / (2.0 * alphas[k]);
        worst = worst.max(pair.f.eval(next)? - model);
    }
    Ok(worst)
}

/// Largest increase `(g+f)(x_{k+1}) − (g+f)(x_k)` along the trajectory,
/// re-evaluated from the oracles. Steps starting at `+∞` are skipped.
pub fn audit_objective_monotone(pair: &ObjectivePair, t: &Trajectory) -> Result<f64> {
    t.first().check_dim(pair.dim())?;
    let values = t
        .points()
        .iter()
        .map(|x| pair.objective(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(values
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (ExtReal::PosInf, _) => f64::NEG_INFINITY,
            (_, ExtReal::PosInf) => f64::INFINITY,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => b - a,
        })
        .fold(f64::NEG_INFINITY, f64::max))
}
