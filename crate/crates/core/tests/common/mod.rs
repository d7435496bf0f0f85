#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use selfcontract::oracles::{
    indicator, l1_norm, quadratic, ObjectivePair, SharedProxable, SharedSmooth, SmoothOracle,
};
use selfcontract::sets::{affine_subspace, ball, box_set, halfspace, SharedSet};
use selfcontract::{Point, Trajectory};

pub fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_point(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Point {
    Point::new((0..d).map(|_| rng.random_range(lo..hi)).collect()).unwrap()
}

pub fn gaussian_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    Point::new((0..d).map(|_| rng.sample(StandardNormal)).collect()).unwrap()
}

/// `U diag(λ) Uᵀ` with `U` orthogonal and eigenvalues drawn from `[lo, hi]`.
pub fn random_psd(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let u = g.qr().q();
    let lambdas: Vec<f64> = (0..d).map(|_| rng.random_range(lo..=hi)).collect();
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambdas.clone()));
    let q = &u * diag * u.transpose();
    let q = (&q + q.transpose()) * 0.5;
    let rows = (0..d)
        .map(|i| (0..d).map(|j| q[(i, j)]).collect())
        .collect();
    (rows, lambdas)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularizer {
    L1,
    Ball,
    Box,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub dim: usize,
    pub regularizer: Regularizer,
    pub pair: ObjectivePair,
    pub x0: Point,
    pub lipschitz: f64,
    pub top_eigenvalue: f64,
}

/// Random PSD quadratic plus an l1 term or the indicator of a ball or box.
pub fn composite_instance(seed: u64, dims: std::ops::RangeInclusive<usize>) -> Instance {
    let mut r = rng(seed);
    let dim = r.random_range(dims);
    let (rows, lambdas) = random_psd(&mut r, dim, 1.0, 4.0);
    let b = uniform_point(&mut r, dim, -3.0, 3.0);
    let f = quadratic(&rows, b, 0.0).unwrap();
    let lipschitz = f.lipschitz();
    let regularizer = match r.random_range(0..3) {
        0 => Regularizer::L1,
        1 => Regularizer::Ball,
        _ => Regularizer::Box,
    };
    let g: SharedProxable = match regularizer {
        Regularizer::L1 => Arc::new(l1_norm(dim, r.random_range(0.1..1.0)).unwrap()),
        Regularizer::Ball => {
            let c = uniform_point(&mut r, dim, -2.0, 2.0);
            Arc::new(indicator(Arc::new(
                ball(c, r.random_range(0.5..3.0)).unwrap(),
            )))
        }
        Regularizer::Box => {
            let lo = uniform_point(&mut r, dim, -3.0, 0.0);
            let hi = Point::new(
                lo.coords()
                    .iter()
                    .map(|l| l + r.random_range(0.5..4.0))
                    .collect(),
            )
            .unwrap();
            Arc::new(indicator(Arc::new(box_set(lo, hi).unwrap())))
        }
    };
    let x0 = uniform_point(&mut r, dim, -5.0, 5.0);
    let f: SharedSmooth = Arc::new(f);
    Instance {
        seed,
        dim,
        regularizer,
        pair: ObjectivePair::new(f, g).unwrap(),
        x0,
        lipschitz,
        top_eigenvalue: lambdas.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Ball,
    Halfspace,
    Box,
    Affine,
}

pub const ALL_KINDS: [SetKind; 4] = [
    SetKind::Ball,
    SetKind::Halfspace,
    SetKind::Box,
    SetKind::Affine,
];

pub fn pick(r: &mut ChaCha8Rng, kinds: &[SetKind]) -> SetKind {
    kinds[r.random_range(0..kinds.len())]
}

fn unit(r: &mut ChaCha8Rng, d: usize) -> Point {
    let g = gaussian_point(r, d);
    g.scale(1.0 / g.norm())
}

fn affine_through(r: &mut ChaCha8Rng, d: usize, mut rows: Vec<Vec<f64>>, p: &Point) -> SharedSet {
    let extra = r.random_range(0..d.saturating_sub(rows.len()).max(1));
    for _ in 0..extra {
        rows.push(gaussian_point(r, d).into_coords());
    }
    let b: Vec<f64> = rows
        .iter()
        .map(|row| row.iter().zip(p.coords()).map(|(a, x)| a * x).sum())
        .collect();
    Arc::new(affine_subspace(&rows, &b).unwrap())
}

/// A random set of the given kind that contains `anchor`.
pub fn containing_set(r: &mut ChaCha8Rng, d: usize, anchor: &Point, kind: SetKind) -> SharedSet {
    match kind {
        SetKind::Ball => {
            let offset = uniform_point(r, d, -1.5, 1.5);
            let radius = offset.norm() + r.random_range(0.1..1.5);
            Arc::new(ball(anchor.add(&offset), radius).unwrap())
        }
        SetKind::Halfspace => {
            let a = gaussian_point(r, d);
            let b = a.dot(anchor) + r.random_range(0.0..1.0);
            Arc::new(halfspace(a, b).unwrap())
        }
        SetKind::Box => {
            let lo = anchor.sub(&uniform_point(r, d, 0.0, 2.0));
            let hi = anchor.add(&uniform_point(r, d, 0.0, 2.0));
            Arc::new(box_set(lo, hi).unwrap())
        }
        SetKind::Affine => {
            let first = gaussian_point(r, d).into_coords();
            affine_through(r, d, vec![first], anchor)
        }
    }
}

/// A random set of the given kind inside `{x : sign · ⟨u, x⟩ ≥ gap}` for a unit `u`.
pub fn side_set(
    r: &mut ChaCha8Rng,
    d: usize,
    u: &Point,
    gap: f64,
    sign: f64,
    kind: SetKind,
) -> SharedSet {
    let w = gaussian_point(r, d);
    let perp = w.axpy(-w.dot(u), u);
    match kind {
        SetKind::Ball | SetKind::Box => {
            let radius = r.random_range(0.3..2.0);
            let c = perp.axpy(sign * (gap + radius), u);
            Arc::new(ball(c, radius).unwrap())
        }
        SetKind::Halfspace => Arc::new(halfspace(u.scale(-sign), -gap).unwrap()),
        SetKind::Affine => {
            let p = perp.axpy(sign * gap, u);
            affine_through(r, d, vec![u.coords().to_vec()], &p)
        }
    }
}

/// Two sets with a common point (`disjoint = false`) or separated by a slab.
pub fn set_pair(
    r: &mut ChaCha8Rng,
    d: usize,
    kinds: &[SetKind],
    disjoint: bool,
) -> (SharedSet, SharedSet) {
    let (ka, kb) = (pick(r, kinds), pick(r, kinds));
    if disjoint {
        let u = unit(r, d);
        let gap = r.random_range(0.1..1.5);
        (
            side_set(r, d, &u, gap, -1.0, ka),
            side_set(r, d, &u, gap, 1.0, kb),
        )
    } else {
        let anchor = uniform_point(r, d, -2.0, 2.0);
        (
            containing_set(r, d, &anchor, ka),
            containing_set(r, d, &anchor, kb),
        )
    }
}

pub fn line(xs: impl IntoIterator<Item = f64>) -> Trajectory {
    Trajectory::from_points(xs.into_iter().map(|x| pt(&[x])).collect(), "line").unwrap()
}

/// Definition-level check over all triples `k1 < k2 ≤ k3`, with the same
/// relative tolerance as the library checker.
pub fn brute_force_self_contracted(t: &Trajectory, tol: f64) -> bool {
    let p = t.points();
    let d = |i: usize, j: usize| {
        p[i].coords()
            .iter()
            .zip(p[j].coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    for k3 in 0..p.len() {
        for k2 in 0..=k3 {
            for k1 in 0..k2 {
                let (near, far) = (d(k3, k2), d(k3, k1));
                if near - far > tol * (1.0 + far) {
                    return false;
                }
            }
        }
    }
    true
}

/// Repeats the last point so that every trajectory has `n` entries.
pub fn padded(t: &Trajectory, n: usize) -> Vec<Point> {
    let mut pts = t.points().to_vec();
    while pts.len() < n {
        pts.push(t.last().clone());
    }
    pts
}
