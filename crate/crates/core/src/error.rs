use thiserror::Error;

/// Errors raised by points, oracles, sets, runners and audits.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("trajectory has no points")]
    EmptyTrajectory,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric: |Q[{row}][{col}] - Q[{col}][{row}]| = {gap}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("affine system is inconsistent: least-squares residual {residual}")]
    InconsistentSystem { residual: f64 },

    #[error("stepsize guarantee violated at k = {k}: alpha = {alpha} exceeds 1/L = {bound}")]
    GuaranteeViolated { k: usize, alpha: f64, bound: f64 },

    #[error("backtracking exhausted {shrinks} shrinks at k = {k} (last alpha = {alpha})")]
    BacktrackingExhausted {
        k: usize,
        shrinks: usize,
        alpha: f64,
    },

    #[error("iterate became non-finite at k = {k}")]
    Diverged { k: usize },

    #[error("trajectory carries no recorded stepsizes")]
    MissingStepsizes,

    #[error("trajectory csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
