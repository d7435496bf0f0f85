use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::Execution;
use crate::trajectory::Trajectory;

/// Default relative tolerance for self-contraction verdicts.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of a self-contraction check.
///
/// A pair `(k, m)` with `k + 1 ≤ m` fails when the raw violation
/// `d(x_m, x_{k+1}) − d(x_m, x_k)` exceeds `tol · (1 + d(x_m, x_k))`.
/// `max_violation` is the largest raw violation over all pairs (0 when none
/// is positive); `witness` is the failing pair with the largest raw
/// violation, i.e. the triple `(k, k + 1, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfContractionVerdict {
    pub is_self_contracted: bool,
    pub max_violation: f64,
    pub witness: Option<(usize, usize)>,
    pub tolerance_used: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct AnchorScan {
    max_raw: Option<(f64, usize)>,
    max_failing: Option<(f64, usize)>,
}

fn better(candidate: Option<(f64, usize, usize)>, current: Option<(f64, usize, usize)>) -> bool {
    match (candidate, current) {
        (Some(_), None) => true,
        (Some((c, ..)), Some((b, ..))) => c > b,
        _ => false,
    }
}

/// Certifies or refutes self-contractedness of `t`.
///
/// A sequence is self-contracted iff for every anchor `m` the distances
/// `k ↦ d(x_m, x_k)` are non-increasing on `0..=m`, so only adjacent pairs
/// need checking: `O(K²)` distance evaluations in total.
pub fn check_self_contracted(t: &Trajectory, tol: f64) -> Result<SelfContractionVerdict> {
    check_self_contracted_with(t, tol, Execution::default())
}

pub fn check_self_contracted_with(
    t: &Trajectory,
    tol: f64,
    exec: Execution,
) -> Result<SelfContractionVerdict> {
    let pts = t.points();
    let scans = exec.map(pts.len(), |m| {
        let anchor = &pts[m];
        let mut scan = AnchorScan::default();
        let mut prev = anchor.dist(&pts[0]);
        // k + 1 = m gives d(x_m, x_m) = 0 and can never fail.
        for k in 0..m.saturating_sub(1) {
            let next = anchor.dist(&pts[k + 1]);
            let raw = next - prev;
            if raw > 0.0 {
                if scan.max_raw.is_none_or(|(v, _)| raw > v) {
                    scan.max_raw = Some((raw, k));
                }
                if raw > tol * (1.0 + prev) && scan.max_failing.is_none_or(|(v, _)| raw > v) {
                    scan.max_failing = Some((raw, k));
                }
            }
            prev = next;
        }
        scan
    });

    let mut max_raw: Option<(f64, usize, usize)> = None;
    let mut worst: Option<(f64, usize, usize)> = None;
    for (m, scan) in scans.into_iter().enumerate() {
        let raw = scan.max_raw.map(|(v, k)| (v, k, m));
        if better(raw, max_raw) {
            max_raw = raw;
        }
        let failing = scan.max_failing.map(|(v, k)| (v, k, m));
        if better(failing, worst) {
            worst = failing;
        }
    }
    Ok(SelfContractionVerdict {
        is_self_contracted: worst.is_none(),
        max_violation: max_raw.map_or(0.0, |(v, ..)| v),
        witness: worst.map(|(_, k, m)| (k, m)),
        tolerance_used: tol,
    })
}
