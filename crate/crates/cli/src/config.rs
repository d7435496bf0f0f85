//! Versioned JSON problem description and its translation into library objects.

use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use selfcontract::algorithms::{AveragedMode, BacktrackParams, StepsizeSchedule, StopRule};
use selfcontract::oracles::{
    half_squared_distance, indicator, l1_norm, quadratic, sum_smooth, zero_proxable, zero_smooth,
    ObjectivePair, SharedProxable, SharedSmooth,
};
use selfcontract::sets::{affine_subspace, ball, box_set, halfspace, SharedSet};
use selfcontract::Point;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub version: u32,
    pub dimension: usize,
    pub algorithm: AlgorithmSpec,
    #[serde(default)]
    pub f: Option<SmoothSpec>,
    #[serde(default)]
    pub g: Option<ProxSpec>,
    #[serde(default)]
    pub sets: Option<Vec<SetSpec>>,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub stop: Option<StopRule>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solution_hint: Option<Vec<f64>>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    ProxGrad {
        schedule: StepsizeSchedule,
        #[serde(default = "default_true")]
        enforce_guarantee: bool,
    },
    ProxGradBacktracking {
        backtrack: BacktrackParams,
    },
    ProximalPoint {
        schedule: StepsizeSchedule,
    },
    GradientDescent {
        #[serde(default)]
        schedule: Option<StepsizeSchedule>,
        #[serde(default)]
        backtrack: Option<BacktrackParams>,
        #[serde(default = "default_true")]
        enforce_guarantee: bool,
    },
    AlternatingProjections,
    AveragedProjections {
        mode: AveragedMode,
    },
    CyclicProjections,
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::ProxGrad { .. } => "prox_grad",
            AlgorithmSpec::ProxGradBacktracking { .. } => "prox_grad_backtracking",
            AlgorithmSpec::ProximalPoint { .. } => "proximal_point",
            AlgorithmSpec::GradientDescent { .. } => "gradient_descent",
            AlgorithmSpec::AlternatingProjections => "alternating_projections",
            AlgorithmSpec::AveragedProjections { .. } => "averaged_projections",
            AlgorithmSpec::CyclicProjections => "cyclic_projections",
        }
    }

    /// Which of `f`, `g` and `sets` the algorithm consumes.
    fn needs(&self) -> (bool, bool, bool) {
        match self {
            AlgorithmSpec::ProxGrad { .. } | AlgorithmSpec::ProxGradBacktracking { .. } => {
                (true, true, false)
            }
            AlgorithmSpec::ProximalPoint { .. } => (false, true, false),
            AlgorithmSpec::GradientDescent { .. } => (true, false, false),
            AlgorithmSpec::AlternatingProjections
            | AlgorithmSpec::AveragedProjections { .. }
            | AlgorithmSpec::CyclicProjections => (false, false, true),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmoothSpec {
    Quadratic {
        q: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default)]
        c: f64,
    },
    HalfSqDist {
        set: SetSpec,
    },
    Sum {
        terms: Vec<SmoothSpec>,
    },
    Zero,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProxSpec {
    Indicator { set: SetSpec },
    L1 { weight: f64 },
    Zero,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Halfspace { a: Vec<f64>, b: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Affine { a: Vec<Vec<f64>>, b: Vec<f64> },
}

/// Anything wrong with the configuration itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<selfcontract::Error> for ConfigError {
    fn from(e: selfcontract::Error) -> Self {
        ConfigError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

fn point(coords: &[f64], d: usize, what: &str) -> Result<Point> {
    if coords.len() != d {
        return Err(ConfigError(format!(
            "{what} has {} coordinates, expected {d}",
            coords.len()
        )));
    }
    Ok(Point::new(coords.to_vec())?)
}

fn check_dim(found: usize, d: usize, what: &str) -> Result<()> {
    if found != d {
        return Err(ConfigError(format!(
            "{what} has dimension {found}, expected {d}"
        )));
    }
    Ok(())
}

impl SetSpec {
    pub fn build(&self, d: usize) -> Result<SharedSet> {
        Ok(match self {
            SetSpec::Halfspace { a, b } => {
                Arc::new(halfspace(point(a, d, "halfspace normal")?, *b)?)
            }
            SetSpec::Ball { center, radius } => {
                Arc::new(ball(point(center, d, "ball center")?, *radius)?)
            }
            SetSpec::Box { lo, hi } => Arc::new(box_set(
                point(lo, d, "box lower corner")?,
                point(hi, d, "box upper corner")?,
            )?),
            SetSpec::Affine { a, b } => {
                if let Some(row) = a.iter().find(|r| r.len() != d) {
                    check_dim(row.len(), d, "affine row")?;
                }
                Arc::new(affine_subspace(a, b)?)
            }
        })
    }
}

impl SmoothSpec {
    pub fn build(&self, d: usize) -> Result<SharedSmooth> {
        Ok(match self {
            SmoothSpec::Quadratic { q, b, c } => {
                Arc::new(quadratic(q, point(b, d, "quadratic b")?, *c)?)
            }
            SmoothSpec::HalfSqDist { set } => Arc::new(half_squared_distance(set.build(d)?)),
            SmoothSpec::Sum { terms } => Arc::new(sum_smooth(
                terms
                    .iter()
                    .map(|t| t.build(d))
                    .collect::<Result<Vec<_>>>()?,
            )?),
            SmoothSpec::Zero => Arc::new(zero_smooth(d)?),
        })
    }
}

impl ProxSpec {
    pub fn build(&self, d: usize) -> Result<SharedProxable> {
        Ok(match self {
            ProxSpec::Indicator { set } => Arc::new(indicator(set.build(d)?)),
            ProxSpec::L1 { weight } => Arc::new(l1_norm(d, *weight)?),
            ProxSpec::Zero => Arc::new(zero_proxable(d)?),
        })
    }
}

/// A validated configuration with every oracle and set constructed.
#[derive(Debug, Clone)]
pub struct Problem {
    pub algorithm: AlgorithmSpec,
    pub f: Option<SharedSmooth>,
    pub g: Option<SharedProxable>,
    pub sets: Vec<SharedSet>,
    pub x0: Point,
    pub stop: StopRule,
    pub seed: u64,
    pub solution_hint: Option<Point>,
}

impl Problem {
    /// The composite objective behind a proximal-gradient-type run, with the
    /// missing half set to zero; `None` for projection algorithms.
    pub fn pair(&self) -> Option<ObjectivePair> {
        let d = self.x0.dim();
        let f = match &self.f {
            Some(f) => f.clone(),
            None => Arc::new(zero_smooth(d).ok()?),
        };
        let g = match &self.g {
            Some(g) => g.clone(),
            None => Arc::new(zero_proxable(d).ok()?),
        };
        match self.algorithm.needs() {
            (_, _, true) => None,
            _ => ObjectivePair::new(f, g).ok(),
        }
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
    pub step_tol: Option<f64>,
}

pub fn parse(text: &str) -> Result<ProblemConfig> {
    let config: ProblemConfig =
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
    if config.version != VERSION {
        return Err(ConfigError(format!(
            "unsupported config version {}, expected {VERSION}",
            config.version
        )));
    }
    Ok(config)
}

impl ProblemConfig {
    /// Checks that the algorithm gets exactly the ingredients it uses.
    fn check_ingredients(&self) -> Result<()> {
        let (needs_f, needs_g, needs_sets) = self.algorithm.needs();
        let name = self.algorithm.name();
        for (needed, present, field) in [
            (needs_f, self.f.is_some(), "f"),
            (needs_g, self.g.is_some(), "g"),
            (needs_sets, self.sets.is_some(), "sets"),
        ] {
            match (needed, present) {
                (true, false) => return Err(ConfigError(format!("{name} requires `{field}`"))),
                (false, true) => return Err(ConfigError(format!("{name} does not use `{field}`"))),
                _ => {}
            }
        }
        match &self.algorithm {
            AlgorithmSpec::ProxGrad { schedule, .. }
            | AlgorithmSpec::ProximalPoint { schedule } => schedule.validate()?,
            AlgorithmSpec::ProxGradBacktracking { backtrack } => backtrack.validate()?,
            AlgorithmSpec::GradientDescent {
                schedule,
                backtrack,
                ..
            } => match (schedule, backtrack) {
                (Some(s), None) => s.validate()?,
                (None, Some(b)) => b.validate()?,
                _ => {
                    return Err(ConfigError(
                        "gradient_descent needs exactly one of `schedule` and `backtrack`".into(),
                    ))
                }
            },
            _ => {}
        }
        let count = self.sets.as_ref().map_or(0, Vec::len);
        match self.algorithm {
            AlgorithmSpec::AlternatingProjections if count != 2 => Err(ConfigError(format!(
                "alternating_projections needs exactly 2 sets, found {count}"
            ))),
            _ if needs_sets && count == 0 => {
                Err(ConfigError(format!("{name} needs at least one set")))
            }
            _ => Ok(()),
        }
    }

    fn stop_rule(&self, overrides: Overrides) -> Result<StopRule> {
        let mut stop = self.stop.unwrap_or_default();
        if let Some(n) = overrides.max_iters {
            stop.max_iters = n;
        }
        if let Some(tol) = overrides.step_tol {
            stop.step_tolerance = tol;
        }
        stop.validate()?;
        Ok(stop)
    }

    pub fn build(&self, overrides: Overrides) -> Result<Problem> {
        let d = self.dimension;
        if d == 0 {
            return Err(ConfigError("dimension must be positive".into()));
        }
        self.check_ingredients()?;
        let stop = self.stop_rule(overrides)?;
        Ok(Problem {
            algorithm: self.algorithm.clone(),
            f: self.f.as_ref().map(|f| f.build(d)).transpose()?,
            g: self.g.as_ref().map(|g| g.build(d)).transpose()?,
            sets: self
                .sets
                .iter()
                .flatten()
                .map(|s| s.build(d))
                .collect::<Result<_>>()?,
            x0: point(&self.x0, d, "x0")?,
            stop,
            seed: overrides.seed.unwrap_or(self.seed),
            solution_hint: self
                .solution_hint
                .as_ref()
                .map(|h| point(h, d, "solution_hint"))
                .transpose()?,
        })
    }

    /// Builds only the set family, for commands that ignore the algorithm.
    pub fn build_sets(&self, overrides: Overrides) -> Result<(Vec<SharedSet>, Point, StopRule)> {
        let d = self.dimension;
        let specs = match &self.sets {
            Some(s) if !s.is_empty() => s,
            _ => return Err(ConfigError("config specifies no set family".into())),
        };
        let stop = self.stop_rule(overrides)?;
        let sets = specs.iter().map(|s| s.build(d)).collect::<Result<_>>()?;
        Ok((sets, point(&self.x0, d, "x0")?, stop))
    }
}
