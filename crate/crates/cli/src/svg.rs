//! Minimal SVG rendering of planar trajectories.

use std::fmt::Write;

use selfcontract::Trajectory;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 0.05;

/// Polyline through the iterates with a green start and a red end marker.
///
/// Both axes share one scale so that distances are not distorted; the data
/// bounding box is padded by 5% of its larger side. `None` unless the
/// trajectory is planar.
pub fn render(t: &Trajectory) -> Option<String> {
    if t.dim() != 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = t.points().iter().map(|p| (p[0], p[1])).collect();
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in &pts {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let span = (x_hi - x_lo).max(y_hi - y_lo);
    let span = if span > 0.0 { span } else { 1.0 };
    let pad = MARGIN * span;
    let scale = SIZE / (span + 2.0 * pad);
    // Centre the data inside the square canvas, flipping y.
    let x_off = (SIZE - (x_hi - x_lo) * scale) / 2.0;
    let y_off = (SIZE - (y_hi - y_lo) * scale) / 2.0;
    let map = |(x, y): (f64, f64)| {
        (
            x_off + (x - x_lo) * scale,
            SIZE - y_off - (y - y_lo) * scale,
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if pts.len() > 1 {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (px, py) = map(p);
                format!("{px:.3},{py:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }
    let (sx, sy) = map(pts[0]);
    let _ = writeln!(
        out,
        r#"<circle class="start" cx="{sx:.3}" cy="{sy:.3}" r="5" fill="seagreen"/>"#
    );
    if pts.len() > 1 {
        let (ex, ey) = map(pts[pts.len() - 1]);
        let _ = writeln!(
            out,
            r#"<circle class="end" cx="{ex:.3}" cy="{ey:.3}" r="5" fill="firebrick"/>"#
        );
    }
    out.push_str("</svg>\n");
    Some(out)
}
