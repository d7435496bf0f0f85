use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracles::{check_alpha, ExtReal, ProxableOracle};
use crate::point::Point;

/// Grid minimizer of `g(z) + ‖z − v‖²/(2α)` over `[lo, hi]^d`, `d ∈ {1, 2}`.
///
/// Independent of any closed-form prox; meant for cross-checking oracles.
/// Grid points are `lo + i · step`. Ties go to the lowest grid index.
pub fn brute_force_prox(
    g: &dyn ProxableOracle,
    alpha: f64,
    v: &Point,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Point> {
    check_alpha(alpha)?;
    v.check_dim(g.dim())?;
    if v.dim() > 2 {
        return Err(Error::InvalidParameter(format!(
            "grid search supports dimension 1 or 2, found {}",
            v.dim()
        )));
    }
    if !(lo < hi) || !(step > 0.0) {
        return Err(Error::InvalidParameter(
            "grid needs lo < hi and step > 0".into(),
        ));
    }
    let count = ((hi - lo) / step).floor() as usize + 1;
    let node = |i: usize| lo + i as f64 * step;
    let score = |z: &Point| match g.eval(z) {
        Ok(ExtReal::Finite(value)) => value + z.dist(v).powi(2) / (2.0 * alpha),
        _ => f64::INFINITY,
    };

    let best_per_row = Execution::default().map(if v.dim() == 1 { 1 } else { count }, |row| {
        let mut best = (f64::INFINITY, usize::MAX);
        for i in 0..count {
            let z = if v.dim() == 1 {
                Point::from_raw(vec![node(i)])
            } else {
                Point::from_raw(vec![node(row), node(i)])
            };
            let s = score(&z);
            if s < best.0 {
                best = (s, i);
            }
        }
        best
    });
    let mut winner = (f64::INFINITY, 0, 0);
    for (row, (s, i)) in best_per_row.into_iter().enumerate() {
        if s < winner.0 {
            winner = (s, row, i);
        }
    }
    if !winner.0.is_finite() {
        return Err(Error::InvalidParameter(
            "objective is infinite on the whole grid".into(),
        ));
    }
    let (_, row, i) = winner;
    Ok(Point::from_raw(if v.dim() == 1 {
        vec![node(i)]
    } else {
        vec![node(row), node(i)]
    }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::oracles::{indicator, l1_norm, zero_proxable};
    use crate::sets::halfspace;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn grid_prox_examples() {
        let l1 = l1_norm(1, 1.0).unwrap();
        let z = brute_force_prox(&l1, 1.0, &pt(&[3.0]), -10.0, 10.0, 1e-4).unwrap();
        assert!((z[0] - 2.0).abs() <= 1e-4);

        let zero = zero_proxable(1).unwrap();
        let z = brute_force_prox(&zero, 0.3, &pt(&[1.23456]), -10.0, 10.0, 1e-4).unwrap();
        assert!((z[0] - 1.23456).abs() <= 1e-4);

        let left = indicator(Arc::new(halfspace(pt(&[1.0]), 0.0).unwrap()));
        let z = brute_force_prox(&left, 1.0, &pt(&[1.0]), -10.0, 10.0, 1e-4).unwrap();
        assert!(z[0].abs() <= 1e-4);
    }

    #[test]
    fn grid_prox_in_the_plane() {
        let l1 = l1_norm(2, 0.5).unwrap();
        let z = brute_force_prox(&l1, 1.0, &pt(&[1.2, -0.3]), -2.0, 2.0, 1e-2).unwrap();
        assert!((z[0] - 0.7).abs() <= 1e-2 && z[1].abs() <= 1e-2);
    }

    #[test]
    fn grid_prox_rejects_bad_input() {
        let l1 = l1_norm(3, 1.0).unwrap();
        assert!(brute_force_prox(&l1, 1.0, &pt(&[1.0, 1.0, 1.0]), -1.0, 1.0, 0.1).is_err());
        let l1 = l1_norm(1, 1.0).unwrap();
        assert!(brute_force_prox(&l1, 1.0, &pt(&[1.0]), 1.0, -1.0, 0.1).is_err());
        assert!(brute_force_prox(&l1, 1.0, &pt(&[1.0]), -1.0, 1.0, 0.0).is_err());
    }
}
