//! Function oracles for `min g(x) + f(x)`: a smooth convex `f` with Lipschitz
//! gradient and a proper closed convex `g` accessed through its proximal map.

mod prox;
mod smooth;

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::point::Point;

pub use prox::{indicator, l1_norm, zero_proxable, Indicator, L1Norm, ZeroProxable};
pub use smooth::{
    half_squared_distance, quadratic, sum_smooth, zero_smooth, HalfSquaredDistance, Quadratic,
    SmoothSum, ZeroSmooth,
};

/// A real number or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// `+∞` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        self + ExtReal::Finite(rhs)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::PosInf, ExtReal::PosInf) => Some(Ordering::Equal),
            (ExtReal::PosInf, _) => Some(Ordering::Greater),
            (_, ExtReal::PosInf) => Some(Ordering::Less),
        }
    }
}

/// Differentiable convex `f` with an upper bound on its gradient's Lipschitz constant.
pub trait SmoothOracle: Debug + Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Point) -> Result<f64>;

    fn grad(&self, x: &Point) -> Result<Point>;

    /// Upper bound `L` on the Lipschitz constant of `∇f`.
    fn lipschitz(&self) -> f64;
}

/// Proper, closed, convex `g` with a computable proximal map.
pub trait ProxableOracle: Debug + Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Point) -> Result<ExtReal>;

    /// `prox_{αg}(v) = argmin_z g(z) + ‖z − v‖² / (2α)`.
    fn prox(&self, alpha: f64, v: &Point) -> Result<Point>;
}

pub type SharedSmooth = Arc<dyn SmoothOracle>;
pub type SharedProxable = Arc<dyn ProxableOracle>;

/// The composite objective `g + f` on a common dimension.
#[derive(Debug, Clone)]
pub struct ObjectivePair {
    pub f: SharedSmooth,
    pub g: SharedProxable,
}

impl ObjectivePair {
    pub fn new(f: SharedSmooth, g: SharedProxable) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                found: g.dim(),
            });
        }
        Ok(ObjectivePair { f, g })
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `(g + f)(x)`.
    pub fn objective(&self, x: &Point) -> Result<ExtReal> {
        Ok(self.g.eval(x)? + self.f.eval(x)?)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "prox parameter must be positive, found {alpha}"
        )))
    }
}
