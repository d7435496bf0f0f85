use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SharedSmooth, SmoothOracle};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::sets::SharedSet;

const POWER_ITERATIONS: usize = 200;
const LIPSCHITZ_INFLATION: f64 = 1.01;
const POWER_SEED: u64 = 0x5eed_1ab5;

/// `½⟨x, Qx⟩ + ⟨b, x⟩ + c` for symmetric positive-semidefinite `Q`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    q: DMatrix<f64>,
    b: Point,
    c: f64,
    lipschitz: f64,
}

/// Builds a quadratic from the rows of `Q`.
///
/// The Lipschitz bound is the power-iteration estimate of the top eigenvalue
/// inflated by 1%. Symmetry and positive semidefiniteness are validated here.
pub fn quadratic(rows: &[Vec<f64>], b: Point, c: f64) -> Result<Quadratic> {
    let d = b.dim();
    if rows.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: r.len(),
        });
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) || !c.is_finite() {
        return Err(Error::InvalidParameter(
            "quadratic data must be finite".into(),
        ));
    }
    let q = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
    let scale = 1.0 + q.amax();
    for i in 0..d {
        for j in i + 1..d {
            let gap = (q[(i, j)] - q[(j, i)]).abs();
            if gap > 1e-12 * scale {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    gap,
                });
            }
        }
    }
    let min_eigenvalue = q.clone().symmetric_eigen().eigenvalues.min();
    if min_eigenvalue < -1e-10 * scale {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: min_eigenvalue,
        });
    }
    let top = power_iteration(&q);
    let lipschitz = if top > 0.0 {
        LIPSCHITZ_INFLATION * top
    } else {
        1.0
    };
    Ok(Quadratic { q, b, c, lipschitz })
}

/// Rayleigh-quotient estimate of the largest eigenvalue of a PSD matrix.
fn power_iteration(q: &DMatrix<f64>) -> f64 {
    let d = q.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0) + 0.01);
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = q * &v;
        estimate = v.dot(&w);
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        v = w / n;
    }
    estimate.max(v.dot(&(q * &v)))
}

impl Quadratic {
    fn qx(&self, x: &Point) -> DVector<f64> {
        &self.q * DVector::from_column_slice(x.coords())
    }
}

impl SmoothOracle for Quadratic {
    fn dim(&self) -> usize {
        self.b.dim()
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        let qx = self.qx(x);
        let quad: f64 = x.coords().iter().zip(qx.iter()).map(|(a, b)| a * b).sum();
        Ok(0.5 * quad + self.b.dot(x) + self.c)
    }

    fn grad(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim())?;
        let qx = self.qx(x);
        Ok(Point::from_raw(
            qx.iter().zip(self.b.coords()).map(|(a, b)| a + b).collect(),
        ))
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

/// `½ d_C(x)²`, whose gradient is `x − P_C(x)` and is 1-Lipschitz.
#[derive(Debug, Clone)]
pub struct HalfSquaredDistance {
    set: SharedSet,
}

pub fn half_squared_distance(set: SharedSet) -> HalfSquaredDistance {
    HalfSquaredDistance { set }
}

impl SmoothOracle for HalfSquaredDistance {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        let p = self.set.project(x)?;
        Ok(0.5 * x.sub(&p).norm_squared())
    }

    fn grad(&self, x: &Point) -> Result<Point> {
        let p = self.set.project(x)?;
        Ok(x.sub(&p))
    }

    fn lipschitz(&self) -> f64 {
        1.0
    }
}

/// Pointwise sum of smooth oracles; the Lipschitz bounds add.
#[derive(Debug, Clone)]
pub struct SmoothSum {
    terms: Vec<SharedSmooth>,
    lipschitz: f64,
}

pub fn sum_smooth(terms: Vec<SharedSmooth>) -> Result<SmoothSum> {
    let dim = terms
        .first()
        .ok_or_else(|| Error::InvalidParameter("sum of zero smooth oracles".into()))?
        .dim();
    if let Some(t) = terms.iter().find(|t| t.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: t.dim(),
        });
    }
    let lipschitz = terms.iter().map(|t| t.lipschitz()).sum();
    Ok(SmoothSum { terms, lipschitz })
}

impl SmoothOracle for SmoothSum {
    fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    fn grad(&self, x: &Point) -> Result<Point> {
        let mut total = self.terms[0].grad(x)?;
        for t in &self.terms[1..] {
            total = total.add(&t.grad(x)?);
        }
        Ok(total)
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

/// `f ≡ 0`, with the conventional Lipschitz bound 1.
#[derive(Debug, Clone, Copy)]
pub struct ZeroSmooth {
    dim: usize,
}

pub fn zero_smooth(dim: usize) -> Result<ZeroSmooth> {
    if dim == 0 {
        return Err(Error::EmptyPoint);
    }
    Ok(ZeroSmooth { dim })
}

impl SmoothOracle for ZeroSmooth {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim)?;
        Ok(0.0)
    }

    fn grad(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim)?;
        Ok(Point::zeros(self.dim))
    }

    fn lipschitz(&self) -> f64 {
        1.0
    }
}
