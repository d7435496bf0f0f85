//! Closed convex sets with exact Euclidean projections.
//!
//! Product-space points use a block-major layout: block `i` of a point in
//! ℝ^{d·n} occupies coordinates `[i·d, (i+1)·d)`.

use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::point::Point;

/// A nonempty closed convex set that can project any point onto itself.
pub trait ConvexSet: Debug + Send + Sync {
    fn dim(&self) -> usize;

    /// Euclidean projection `P_C(x)`.
    fn project(&self, x: &Point) -> Result<Point>;

    /// Membership up to `tol · (1 + ‖x‖)` in projection distance.
    fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        let p = self.project(x)?;
        Ok(p.dist(x) <= tol * (1.0 + x.norm()))
    }
}

pub type SharedSet = Arc<dyn ConvexSet>;

/// `{x : ⟨a, x⟩ ≤ b}`.
#[derive(Debug, Clone)]
pub struct Halfspace {
    normal: Point,
    offset: f64,
    normal_sq: f64,
}

pub fn halfspace(a: Point, b: f64) -> Result<Halfspace> {
    let normal_sq = a.norm_squared();
    if normal_sq == 0.0 {
        return Err(Error::InvalidParameter(
            "halfspace normal must be nonzero".into(),
        ));
    }
    if !b.is_finite() {
        return Err(Error::InvalidParameter(
            "halfspace offset must be finite".into(),
        ));
    }
    Ok(Halfspace {
        normal: a,
        offset: b,
        normal_sq,
    })
}

impl ConvexSet for Halfspace {
    fn dim(&self) -> usize {
        self.normal.dim()
    }

    fn project(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim())?;
        let excess = (self.normal.dot(x) - self.offset) / self.normal_sq;
        if excess <= 0.0 {
            Ok(x.clone())
        } else {
            Ok(x.axpy(-excess, &self.normal))
        }
    }
}

/// Closed Euclidean ball.
#[derive(Debug, Clone)]
pub struct Ball {
    center: Point,
    radius: f64,
}

pub fn ball(center: Point, radius: f64) -> Result<Ball> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ball radius must be positive, found {radius}"
        )));
    }
    Ok(Ball { center, radius })
}

impl ConvexSet for Ball {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn project(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim())?;
        let offset = x.sub(&self.center);
        let r = offset.norm();
        if r <= self.radius {
            Ok(x.clone())
        } else {
            Ok(self.center.axpy(self.radius / r, &offset))
        }
    }
}

/// Axis-aligned box `lo ≤ x ≤ hi`.
#[derive(Debug, Clone)]
pub struct BoxSet {
    lo: Point,
    hi: Point,
}

pub fn box_set(lo: Point, hi: Point) -> Result<BoxSet> {
    hi.check_dim(lo.dim())?;
    if let Some(i) = (0..lo.dim()).find(|&i| lo[i] > hi[i]) {
        return Err(Error::InvalidParameter(format!(
            "box bounds crossed at coordinate {i}: {} > {}",
            lo[i], hi[i]
        )));
    }
    Ok(BoxSet { lo, hi })
}

impl ConvexSet for BoxSet {
    fn dim(&self) -> usize {
        self.lo.dim()
    }

    fn project(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim())?;
        Ok(Point::from_raw(
            x.coords()
                .iter()
                .enumerate()
                .map(|(i, &c)| c.clamp(self.lo[i], self.hi[i]))
                .collect(),
        ))
    }
}

/// `{x : Ax = b}` for a consistent system.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

const AFFINE_CONSISTENCY_TOL: f64 = 1e-8;

/// Builds the affine set from the rows of `A` and the right-hand side `b`.
pub fn affine_subspace(rows: &[Vec<f64>], b: &[f64]) -> Result<AffineSubspace> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::InvalidParameter(
            "affine system needs at least one row".into(),
        ));
    }
    let d = rows[0].len();
    if d == 0 {
        return Err(Error::EmptyPoint);
    }
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: r.len(),
        });
    }
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if rows.iter().flatten().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "affine system must be finite".into(),
        ));
    }
    let set = AffineSubspace {
        a: DMatrix::from_fn(m, d, |i, j| rows[i][j]),
        b: DVector::from_column_slice(b),
    };
    let particular = set.min_norm_solve(&set.b);
    let residual = (&set.a * particular - &set.b).norm();
    if residual > AFFINE_CONSISTENCY_TOL * (1.0 + set.b.norm()) {
        return Err(Error::InconsistentSystem { residual });
    }
    Ok(set)
}

impl AffineSubspace {
    /// Minimum-norm least-squares solution of `A z = r`, i.e. `A⁺ r`.
    fn min_norm_solve(&self, r: &DVector<f64>) -> DVector<f64> {
        let svd = self.a.clone().svd(true, true);
        let sigma_max = svd.singular_values.max();
        let eps =
            1e-12 * sigma_max.max(f64::MIN_POSITIVE) * self.a.nrows().max(self.a.ncols()) as f64;
        svd.solve(r, eps).expect("u and v were computed")
    }
}

impl ConvexSet for AffineSubspace {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn project(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim())?;
        let xv = DVector::from_column_slice(x.coords());
        let residual = &self.a * &xv - &self.b;
        let correction = self.min_norm_solve(&residual);
        Ok(Point::from_raw((xv - correction).as_slice().to_vec()))
    }
}

/// Cartesian product `C_1 × … × C_n` of sets sharing a dimension.
#[derive(Debug, Clone)]
pub struct ProductSet {
    sets: Vec<SharedSet>,
    block: usize,
}

pub fn product_set(sets: Vec<SharedSet>) -> Result<ProductSet> {
    let block = sets
        .first()
        .ok_or_else(|| Error::InvalidParameter("product of zero sets".into()))?
        .dim();
    for s in &sets {
        if s.dim() != block {
            return Err(Error::DimensionMismatch {
                expected: block,
                found: s.dim(),
            });
        }
    }
    Ok(ProductSet { sets, block })
}

impl ConvexSet for ProductSet {
    fn dim(&self) -> usize {
        self.block * self.sets.len()
    }

    fn project(&self, y: &Point) -> Result<Point> {
        y.check_dim(self.dim())?;
        let mut out = Vec::with_capacity(self.dim());
        for (set, chunk) in self.sets.iter().zip(y.coords().chunks(self.block)) {
            let p = set.project(&Point::from_raw(chunk.to_vec()))?;
            out.extend_from_slice(p.coords());
        }
        Ok(Point::from_raw(out))
    }
}

/// The diagonal `{(y¹, …, yⁿ) : y¹ = … = yⁿ}` in ℝ^{d·n}.
#[derive(Debug, Clone, Copy)]
pub struct DiagonalSet {
    block: usize,
    copies: usize,
}

pub fn diagonal_set(block: usize, copies: usize) -> Result<DiagonalSet> {
    if block == 0 || copies == 0 {
        return Err(Error::InvalidParameter(
            "diagonal set needs positive block dimension and copy count".into(),
        ));
    }
    Ok(DiagonalSet { block, copies })
}

impl DiagonalSet {
    /// Stacks `copies` of `x` into a product-space point.
    pub fn embed(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.block)?;
        Ok(Point::from_raw(x.coords().repeat(self.copies)))
    }
}

impl ConvexSet for DiagonalSet {
    fn dim(&self) -> usize {
        self.block * self.copies
    }

    fn project(&self, y: &Point) -> Result<Point> {
        y.check_dim(self.dim())?;
        let mut mean = vec![0.0; self.block];
        for chunk in y.coords().chunks(self.block) {
            for (m, c) in mean.iter_mut().zip(chunk) {
                *m += c;
            }
        }
        let n = self.copies as f64;
        for m in &mut mean {
            *m /= n;
        }
        Ok(Point::from_raw(mean.repeat(self.copies)))
    }
}
