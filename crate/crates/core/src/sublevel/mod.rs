//! Sublevel sets `{t ∈ K : |Q(t)| ≤ L}`, their Lebesgue measure, and the
//! Chebyshev measure `μ_[a,b]` on the line.
//!
//! Boundary points are roots of `G = |Q|^2 − L^2`. Two independent backends
//! locate them: [`Backend::Eigen`] takes the companion-matrix eigenvalues of
//! `z^{2n} G(z)` and polishes them with Newton's method, [`Backend::Sample`]
//! scans `G` on a fine grid and bisects every sign change. Both feed the same
//! classifier, which labels the pieces between consecutive roots by the sign
//! of `G` at their midpoints, so tangential touch points never split an arc.

mod intervals;
mod measure;
mod roots;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{RemezError, Result};
use crate::trigpoly::{golden_max, TrigPoly};

pub use intervals::{lebesgue, CircleIntervalSet, LineIntervalSet, MERGE_TOLERANCE};
pub use measure::{cheb_measure, line_sublevel_set, pushforward_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Eigen,
    Sample,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Eigen => "eigen",
            Backend::Sample => "sample",
        }
    }

    pub fn from_name(name: &str) -> Option<Backend> {
        match name {
            "eigen" => Some(Backend::Eigen),
            "sample" => Some(Backend::Sample),
            _ => None,
        }
    }
}

/// `{t : |Q(t)| ≤ level}` as canonical arcs.
pub fn sublevel_set(q: &TrigPoly, level: f64, backend: Backend) -> Result<CircleIntervalSet> {
    sublevel_set_with_density(q, level, backend, 1)
}

/// As [`sublevel_set`]; `density` multiplies the sampling grid of the
/// [`Backend::Sample`] route and is ignored by [`Backend::Eigen`].
pub fn sublevel_set_with_density(
    q: &TrigPoly,
    level: f64,
    backend: Backend,
    density: usize,
) -> Result<CircleIntervalSet> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(RemezError::domain(format!("level must be positive and finite, got {level}")));
    }
    let level2 = level * level;
    let g = q.abs_squared().sub_constant(level2);
    if g.l1_norm() < 1e-13 * level2 {
        return Err(RemezError::ConstantOnLevel);
    }
    let mut breaks = match backend {
        Backend::Eigen => roots::eigen_candidates(q, level)?,
        Backend::Sample => roots::sample_candidates(q, level, density),
    };
    breaks.push(0.0);
    breaks.push(TAU);
    let arcs = classify_segments(breaks, |t| q.eval(t).norm(), level, noise_floor(q));
    Ok(CircleIntervalSet::from_arcs(arcs))
}

/// Rounding-level uncertainty in an evaluation of `|Q(t)|`; excursions of
/// `|Q|` across the level smaller than this are treated as tangential.
pub fn noise_floor(q: &TrigPoly) -> f64 {
    16.0 * (2 * q.degree() + 1) as f64 * f64::EPSILON * q.l1_norm()
}

/// `s_Q = 2π − m({t : |Q(t)| ≤ 1})`, the smallest `s` with `Q ∈ 𝒯ₙᶜ(s)`.
pub fn deficiency(q: &TrigPoly) -> Result<f64> {
    deficiency_with(q, Backend::Eigen)
}

pub fn deficiency_with(q: &TrigPoly, backend: Backend) -> Result<f64> {
    deficiency_with_density(q, backend, 1)
}

pub fn deficiency_with_density(q: &TrigPoly, backend: Backend, density: usize) -> Result<f64> {
    let set = sublevel_set_with_density(q, 1.0, backend, density)?;
    Ok((TAU - set.measure()).max(0.0))
}

/// Labels the pieces between sorted breakpoints as inside (`|F| ≤ level`) or
/// outside by the midpoint value, discards excursions that stay within
/// `noise` of the level, and returns the inside runs.
pub(crate) fn classify_segments(
    mut breaks: Vec<f64>,
    modulus: impl Fn(f64) -> f64,
    level: f64,
    noise: f64,
) -> Vec<(f64, f64)> {
    breaks.retain(|t| t.is_finite());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + b.abs()));
    let mut segments: Vec<(f64, f64, bool)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (w[0], w[1], modulus(mid) <= level)
        })
        .collect();

    for seg in segments.iter_mut().filter(|s| !s.2) {
        let mid = 0.5 * (seg.0 + seg.1);
        if modulus(mid) <= level + noise && extreme_on(&modulus, seg.0, seg.1, true) <= level + noise {
            seg.2 = true;
        }
    }
    let mut runs = coalesce(segments);
    for run in runs.iter_mut().filter(|s| s.2) {
        let mid = 0.5 * (run.0 + run.1);
        if modulus(mid) >= level - noise && extreme_on(&modulus, run.0, run.1, false) >= level - noise {
            run.2 = false;
        }
    }
    runs = coalesce(runs);
    runs.into_iter()
        .filter(|s| s.2)
        .map(|(lo, hi, _)| (lo, hi))
        .collect()
}

fn coalesce(segments: Vec<(f64, f64, bool)>) -> Vec<(f64, f64, bool)> {
    let mut out: Vec<(f64, f64, bool)> = Vec::with_capacity(segments.len());
    for seg in segments {
        match out.last_mut() {
            Some(last) if last.2 == seg.2 && last.1 >= seg.0 => last.1 = seg.1,
            _ => out.push(seg),
        }
    }
    out
}

/// Max (or min) of `f` on `[a, b]`: 64 samples, then golden-section
/// refinement around the best one.
fn extreme_on(f: &impl Fn(f64) -> f64, a: f64, b: f64, maximise: bool) -> f64 {
    let samples = 64;
    let h = (b - a) / samples as f64;
    let sign = if maximise { 1.0 } else { -1.0 };
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..=samples {
        let v = sign * f(a + i as f64 * h);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = (a + (best_i as f64 - 1.0) * h).max(a);
    let hi = (a + (best_i as f64 + 1.0) * h).min(b);
    let (_, refined) = golden_max(|t| sign * f(t), lo, hi);
    sign * best.max(refined)
}
