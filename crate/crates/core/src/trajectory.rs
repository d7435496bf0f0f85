//! Iterate sequences, their elementary metrics, and the trajectory CSV format.
//!
//! CSV layout: header `k,x0,x1,...,x{d-1}[,alpha][,objective]`, one row per
//! iterate. The `alpha` cell of row `k` holds the stepsize that produced
//! iterate `k + 1`, so it is empty on the final row. Reals are written with
//! 17 significant digits so that a write/read cycle is exact.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::point::Point;

/// An immutable, validated sequence of iterates with optional per-step data.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<Point>,
    stepsizes: Option<Vec<f64>>,
    objective_values: Option<Vec<f64>>,
    label: String,
}

impl Trajectory {
    pub fn new(
        points: Vec<Point>,
        stepsizes: Option<Vec<f64>>,
        objective_values: Option<Vec<f64>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyTrajectory)?;
        let dim = first.dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        let steps = points.len() - 1;
        if let Some(alphas) = &stepsizes {
            if alphas.len() != steps {
                return Err(Error::InvalidParameter(format!(
                    "expected {steps} stepsizes, found {}",
                    alphas.len()
                )));
            }
            if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
                return Err(Error::InvalidParameter(format!(
                    "stepsizes must be positive, found {a}"
                )));
            }
        }
        if let Some(values) = &objective_values {
            if values.len() != points.len() {
                return Err(Error::InvalidParameter(format!(
                    "expected {} objective values, found {}",
                    points.len(),
                    values.len()
                )));
            }
        }
        Ok(Trajectory {
            points,
            stepsizes,
            objective_values,
            label: label.into(),
        })
    }

    /// A trajectory of bare points.
    pub fn from_points(points: Vec<Point>, label: impl Into<String>) -> Result<Self> {
        Trajectory::new(points, None, None, label)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn stepsizes(&self) -> Option<&[f64]> {
        self.stepsizes.as_deref()
    }

    pub fn objective_values(&self) -> Option<&[f64]> {
        self.objective_values.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// Number of points, `K + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: trajectories hold at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("non-empty")
    }

    /// Keeps the first `n` points (at least one) along with matching metadata.
    pub fn prefix(&self, n: usize) -> Trajectory {
        let n = n.clamp(1, self.len());
        Trajectory {
            points: self.points[..n].to_vec(),
            stepsizes: self.stepsizes.as_ref().map(|s| s[..n - 1].to_vec()),
            objective_values: self.objective_values.as_ref().map(|v| v[..n].to_vec()),
            label: self.label.clone(),
        }
    }

    /// Same trajectory under a new label.
    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Step lengths `‖x_{k+1} − x_k‖` for `k = 0..K`.
    pub fn step_lengths(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1].dist(&w[0])).collect()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec!["k".to_string()];
        header.extend((0..self.dim()).map(|i| format!("x{i}")));
        if self.stepsizes.is_some() {
            header.push("alpha".into());
        }
        if self.objective_values.is_some() {
            header.push("objective".into());
        }
        out.write_record(&header).map_err(csv_err)?;
        for (k, p) in self.points.iter().enumerate() {
            let mut row = vec![k.to_string()];
            row.extend(p.coords().iter().map(|c| fmt_real(*c)));
            if let Some(alphas) = &self.stepsizes {
                row.push(alphas.get(k).map(|a| fmt_real(*a)).unwrap_or_default());
            }
            if let Some(values) = &self.objective_values {
                row.push(fmt_real(values[k]));
            }
            out.write_record(&row).map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::Csv(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Trajectory> {
        let mut input = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = input.headers().map_err(csv_err)?.clone();
        let names: Vec<&str> = header.iter().collect();
        if names.first() != Some(&"k") {
            return Err(Error::Csv("header must start with `k`".into()));
        }
        let mut dim = 0;
        while names.get(1 + dim) == Some(&format!("x{dim}").as_str()) {
            dim += 1;
        }
        if dim == 0 {
            return Err(Error::Csv("header names no coordinate columns".into()));
        }
        let mut col = 1 + dim;
        let alpha_col = (names.get(col) == Some(&"alpha")).then(|| {
            col += 1;
            col - 1
        });
        let objective_col = (names.get(col) == Some(&"objective")).then(|| {
            col += 1;
            col - 1
        });
        if col != names.len() {
            return Err(Error::Csv(format!("unexpected column `{}`", names[col])));
        }

        let mut points = Vec::new();
        let mut alphas = Vec::new();
        let mut objectives = Vec::new();
        let mut missing_alpha_at = None;
        for (row_index, record) in input.records().enumerate() {
            let record = record.map_err(csv_err)?;
            let k: usize = record[0]
                .parse()
                .map_err(|_| Error::Csv(format!("row {row_index}: bad index `{}`", &record[0])))?;
            if k != row_index {
                return Err(Error::Csv(format!(
                    "row {row_index}: index {k} out of sequence"
                )));
            }
            let coords = (1..=dim)
                .map(|c| parse_real(&record[c], row_index))
                .collect::<Result<Vec<_>>>()?;
            points
                .push(Point::new(coords).map_err(|e| Error::Csv(format!("row {row_index}: {e}")))?);
            if let Some(c) = alpha_col {
                if record[c].is_empty() {
                    missing_alpha_at.get_or_insert(row_index);
                } else {
                    if let Some(at) = missing_alpha_at {
                        return Err(Error::Csv(format!("row {at}: missing alpha")));
                    }
                    alphas.push(parse_real(&record[c], row_index)?);
                }
            }
            if let Some(c) = objective_col {
                objectives.push(parse_real(&record[c], row_index)?);
            }
        }
        if points.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        if let Some(at) = missing_alpha_at {
            if at + 1 != points.len() {
                return Err(Error::Csv(format!("row {at}: missing alpha")));
            }
        }
        Trajectory::new(
            points,
            alpha_col.map(|_| alphas),
            objective_col.map(|_| objectives),
            "csv",
        )
        .map_err(|e| Error::Csv(e.to_string()))
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_real(cell: &str, row: usize) -> Result<f64> {
    cell.parse()
        .map_err(|_| Error::Csv(format!("row {row}: bad number `{cell}`")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

/// Accumulates iterates during a run; frozen with [`TrajectoryBuilder::finish`].
#[derive(Debug, Clone)]
pub struct TrajectoryBuilder {
    points: Vec<Point>,
    stepsizes: Vec<f64>,
    objective_values: Vec<f64>,
    record_steps: bool,
    record_objective: bool,
}

impl TrajectoryBuilder {
    pub fn new(x0: Point) -> Self {
        TrajectoryBuilder {
            points: vec![x0],
            stepsizes: Vec::new(),
            objective_values: Vec::new(),
            record_steps: false,
            record_objective: false,
        }
    }

    /// Starts a builder that also records stepsizes and objective values.
    pub fn with_metadata(x0: Point, objective0: f64) -> Self {
        TrajectoryBuilder {
            points: vec![x0],
            stepsizes: Vec::new(),
            objective_values: vec![objective0],
            record_steps: true,
            record_objective: true,
        }
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("builder holds x0")
    }

    pub fn push(&mut self, x: Point) {
        debug_assert!(!self.record_steps);
        self.points.push(x);
    }

    pub fn push_step(&mut self, x: Point, alpha: f64, objective: f64) {
        debug_assert!(self.record_steps);
        self.points.push(x);
        self.stepsizes.push(alpha);
        self.objective_values.push(objective);
    }

    pub fn finish(self, label: impl Into<String>) -> Result<Trajectory> {
        Trajectory::new(
            self.points,
            self.record_steps.then_some(self.stepsizes),
            self.record_objective.then_some(self.objective_values),
            label,
        )
    }
}

/// Total length `Σ ‖x_{k+1} − x_k‖`, summed from the tail so small steps go first.
pub fn length(t: &Trajectory) -> f64 {
    t.step_lengths().iter().rev().sum()
}

/// Largest pairwise distance, by exhaustive scan.
pub fn diameter(t: &Trajectory) -> f64 {
    diameter_with(t, Execution::default())
}

pub fn diameter_with(t: &Trajectory, exec: Execution) -> f64 {
    let pts = t.points();
    exec.map(pts.len(), |i| {
        pts[i + 1..]
            .iter()
            .map(|q| pts[i].dist(q))
            .fold(0.0, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}
