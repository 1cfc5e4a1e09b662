//! The Chebyshev (arcsine) measure `μ_[a,b]` and the line sublevel sets it
//! is applied to.

use std::f64::consts::PI;

use crate::algpoly::AlgPoly;
use crate::error::{RemezError, Result};
use crate::trigpoly::TrigPoly;

use super::intervals::LineIntervalSet;
use super::roots::line_candidates;
use super::{classify_segments, sublevel_set, Backend};

/// `μ_[a,b](S)`: the measure with density `h / √(h² − (x − m)²)` on `[a, b]`,
/// `h = (b−a)/2`, `m = (a+b)/2`. Its total mass is `h·π`.
///
/// Each piece `[c, d]` contributes `h·(θ(c) − θ(d))` with `θ(x) = arccos((x−m)/h)`,
/// and `θ` is computed from the distance to the nearer endpoint so that arcs
/// touching `a` or `b` keep full relative accuracy.
pub fn cheb_measure(a: f64, b: f64, set: &LineIntervalSet) -> Result<f64> {
    if !(a < b) {
        return Err(RemezError::domain(format!("cheb_measure needs a < b, got [{a}, {b}]")));
    }
    let half = 0.5 * (b - a);
    let mut total = 0.0;
    for &(lo, hi) in set.arcs() {
        if lo < a || hi > b {
            return Err(RemezError::domain(format!(
                "interval [{lo}, {hi}] leaves [{a}, {b}]"
            )));
        }
        total += half * (angle_from_right(a, b, lo) - angle_from_right(a, b, hi));
    }
    Ok(total)
}

/// `arccos((x − m)/h)` for `x ∈ [a, b]`.
fn angle_from_right(a: f64, b: f64, x: f64) -> f64 {
    let width = b - a;
    let mid = 0.5 * (a + b);
    if x >= mid {
        2.0 * ((b - x) / width).clamp(0.0, 1.0).sqrt().asin()
    } else {
        PI - 2.0 * ((x - a) / width).clamp(0.0, 1.0).sqrt().asin()
    }
}

/// `{x ∈ [a, b] : |P(x)| ≤ level}`, from the real roots of `|P|^2 − level^2`.
pub fn line_sublevel_set(p: &AlgPoly, level: f64, a: f64, b: f64) -> Result<LineIntervalSet> {
    if !(level > 0.0) {
        return Err(RemezError::domain(format!("level must be positive, got {level}")));
    }
    let mut breaks = line_candidates(p, level, a, b)?;
    breaks.push(a);
    breaks.push(b);
    let noise = 16.0 * (p.degree() + 1) as f64 * f64::EPSILON
        * p.coeffs().iter().map(|c| c.norm()).sum::<f64>()
        * a.abs().max(b.abs()).max(1.0).powi(p.degree() as i32);
    let arcs = classify_segments(breaks, |x| p.eval(x).norm(), level, noise);
    LineIntervalSet::new(a, b, arcs.into_iter().map(|(lo, hi)| (lo.max(a), hi.min(b))))
}

/// For even `Q = P(cos t)`: the pair
/// `(μ_[-1,1]({x : |P(x)| ≤ 1}), ½·m({t : |Q(t)| ≤ 1}))`, which agree
/// because `x = cos t` carries `μ_[-1,1]` to Lebesgue measure on `[0, π]`.
pub fn pushforward_check(q: &TrigPoly) -> Result<(f64, f64)> {
    let p = q.to_cos_poly()?;
    let line = line_sublevel_set(&p, 1.0, -1.0, 1.0)?;
    let circle = sublevel_set(q, 1.0, Backend::Eigen)?;
    Ok((cheb_measure(-1.0, 1.0, &line)?, 0.5 * circle.measure()))
}
