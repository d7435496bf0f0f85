use super::{check_alpha, ExtReal, ProxableOracle};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::sets::SharedSet;

/// Membership tolerance for evaluating indicator functions.
pub const INDICATOR_TOL: f64 = 1e-9;

/// `δ_C`: zero on `C`, `+∞` elsewhere. Its prox is the projection for every α.
#[derive(Debug, Clone)]
pub struct Indicator {
    set: SharedSet,
}

pub fn indicator(set: SharedSet) -> Indicator {
    Indicator { set }
}

impl Indicator {
    pub fn set(&self) -> &SharedSet {
        &self.set
    }
}

impl ProxableOracle for Indicator {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn eval(&self, x: &Point) -> Result<ExtReal> {
        Ok(if self.set.contains(x, INDICATOR_TOL)? {
            ExtReal::Finite(0.0)
        } else {
            ExtReal::PosInf
        })
    }

    fn prox(&self, alpha: f64, v: &Point) -> Result<Point> {
        check_alpha(alpha)?;
        self.set.project(v)
    }
}

/// `weight · ‖x‖₁`; its prox is componentwise soft-thresholding.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    dim: usize,
    weight: f64,
}

pub fn l1_norm(dim: usize, weight: f64) -> Result<L1Norm> {
    if dim == 0 {
        return Err(Error::EmptyPoint);
    }
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "l1 weight must be positive, found {weight}"
        )));
    }
    Ok(L1Norm { dim, weight })
}

fn soft_threshold(v: f64, threshold: f64) -> f64 {
    if v > threshold {
        v - threshold
    } else if v < -threshold {
        v + threshold
    } else {
        0.0
    }
}

impl ProxableOracle for L1Norm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<ExtReal> {
        x.check_dim(self.dim)?;
        Ok(ExtReal::Finite(
            self.weight * x.coords().iter().map(|c| c.abs()).sum::<f64>(),
        ))
    }

    fn prox(&self, alpha: f64, v: &Point) -> Result<Point> {
        check_alpha(alpha)?;
        v.check_dim(self.dim)?;
        let t = alpha * self.weight;
        Ok(Point::from_raw(
            v.coords().iter().map(|&c| soft_threshold(c, t)).collect(),
        ))
    }
}

/// `g ≡ 0`; its prox is the identity.
#[derive(Debug, Clone, Copy)]
pub struct ZeroProxable {
    dim: usize,
}

pub fn zero_proxable(dim: usize) -> Result<ZeroProxable> {
    if dim == 0 {
        return Err(Error::EmptyPoint);
    }
    Ok(ZeroProxable { dim })
}

impl ProxableOracle for ZeroProxable {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<ExtReal> {
        x.check_dim(self.dim)?;
        Ok(ExtReal::Finite(0.0))
    }

    fn prox(&self, alpha: f64, v: &Point) -> Result<Point> {
        check_alpha(alpha)?;
        v.check_dim(self.dim)?;
        Ok(v.clone())
    }
}
