//! Derivative-free search for polynomials that come close to (or beat) a bound.
//!
//! Each restart starts from a seeded member and runs a pattern search over the
//! real and imaginary parts of the free coefficients, along coordinate and
//! random directions with step expansion. Moves are scored by a grid estimate
//! of `sup|Q|/λ*`, which is unchanged by scaling. Whenever a sweep improves,
//! the iterate is rescaled into the class exactly (see [`tighten`]) and scored
//! by `sup|Q| − κ·max(0, deficiency(Q) − s)`, so κ only guards against grid
//! error in the cheap score.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::{member, tighten, MemberParity, MEMBERSHIP_TOLERANCE};
use crate::chebyshev::BoundKind;
use crate::error::{RemezError, Result};
use crate::rng::{stream, task_seed};
use crate::sublevel::{deficiency_with_density, Backend};
use crate::trigpoly::TrigPoly;

/// A reported ratio above `1 + VIOLATION_TOLERANCE` after re-verification
/// counts as a violation.
pub const VIOLATION_TOLERANCE: f64 = 1e-6;
/// Grid multiplier for the final verification.
pub const VERIFY_DENSITY: usize = 10;
const MAX_TRACE: usize = 1000;
const KAPPA_CAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub n: usize,
    pub s: f64,
    pub parity: MemberParity,
    /// Restrict to real-valued polynomials.
    pub real: bool,
    pub kind: BoundKind,
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub budget: usize,
    pub seed: u64,
    /// Penalty weight; `None` means `10·bound`, capped at `1e6`.
    pub kappa: Option<f64>,
    /// Initial step, relative to the largest coefficient.
    pub initial_step: f64,
    pub step_decay: f64,
    pub min_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n: 2,
            s: std::f64::consts::PI,
            parity: MemberParity::Even,
            real: true,
            kind: BoundKind::EvenPeriod,
            restarts: 8,
            budget: 2000,
            seed: 1,
            kappa: None,
            initial_step: 0.25,
            step_decay: 0.5,
            min_step: 1e-7,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(RemezError::InvalidConfig(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !self.kind.is_periodic() {
            return bad(format!("{} is not a bound on the period", self.kind.name()));
        }
        if let Err(e) = self.kind.check_domain(self.n, self.s) {
            return bad(e.to_string());
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        if self.budget < 100 {
            return bad("budget must be at least 100".into());
        }
        if let Some(k) = self.kappa {
            if !(k > 0.0 && k.is_finite()) {
                return bad(format!("kappa must be positive, got {k}"));
            }
        }
        if !(self.initial_step > 0.0 && self.min_step > 0.0 && self.min_step <= self.initial_step) {
            return bad("steps must satisfy 0 < min_step <= initial_step".into());
        }
        if !(self.step_decay > 0.0 && self.step_decay < 1.0) {
            return bad("step_decay must lie in (0, 1)".into());
        }
        Ok(())
    }

    fn kappa_value(&self) -> Result<f64> {
        Ok(match self.kappa {
            Some(k) => k,
            None => match self.kind.bound(self.n, self.s) {
                Ok(b) => (10.0 * b).min(KAPPA_CAP),
                Err(RemezError::Overflow) => KAPPA_CAP,
                Err(e) => return Err(e),
            },
        })
    }
}

/// Best polynomial found, with its verified ratio and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_poly: TrigPoly,
    pub best_ratio: f64,
    pub best_restart: usize,
    /// Seed of the winning restart, `task_seed(config.seed, best_restart)`.
    pub best_seed: u64,
    /// `(evaluations, best ratio so far)` for the winning restart.
    pub trace: Vec<(usize, f64)>,
    pub violated: bool,
    pub bound: Option<f64>,
    pub log_bound: f64,
    pub verified_sup: f64,
    pub deficiency_eigen: f64,
    pub deficiency_sample: f64,
    pub evaluations: usize,
    pub failed_restarts: usize,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serialises")
    }
}

/// `sup|Q| / bound(n, s)`, from logarithms when the bound overflows.
pub fn sharpness_ratio(q: &TrigPoly, s: f64, kind: BoundKind) -> Result<f64> {
    kind.check_domain(q.degree(), s)?;
    let d = deficiency_or_zero(q, Backend::Eigen, 1)?;
    if d > s + MEMBERSHIP_TOLERANCE {
        return Err(RemezError::ConstraintViolated { deficiency: d, s });
    }
    ratio_unchecked(q, q.degree(), s, kind, 1)
}

fn ratio_unchecked(q: &TrigPoly, n: usize, s: f64, kind: BoundKind, density: usize) -> Result<f64> {
    match kind.bound(n, s) {
        Ok(b) if b <= 1e300 => Ok(q.sup_norm_with_density(density) / b),
        Ok(_) | Err(RemezError::Overflow) => {
            Ok((q.log_sup_norm_with_density(density) - kind.log_bound(n, s)?).exp())
        }
        Err(e) => Err(e),
    }
}

fn deficiency_or_zero(q: &TrigPoly, backend: Backend, density: usize) -> Result<f64> {
    match deficiency_with_density(q, backend, density) {
        Err(RemezError::ConstantOnLevel) => Ok(0.0),
        other => other,
    }
}

/// Free real parameters of a polynomial under parity and reality constraints:
/// each slot is one component of one coefficient, mirrored onto `c_{-k}`.
struct Layout {
    n: usize,
    parity: MemberParity,
    real: bool,
    slots: Vec<(i64, bool)>,
}

impl Layout {
    fn new(n: usize, parity: MemberParity, real: bool) -> Self {
        let mut slots = Vec::new();
        let n_i = n as i64;
        let ks: Vec<i64> = match (parity, real) {
            (MemberParity::Any, false) => (-n_i..=n_i).collect(),
            _ => (0..=n_i).collect(),
        };
        for k in ks {
            let (re, im) = match (parity, real, k) {
                (MemberParity::Odd, _, 0) => (false, false),
                (_, true, 0) => (true, false),
                (MemberParity::Even, true, _) => (true, false),
                (MemberParity::Odd, true, _) => (false, true),
                _ => (true, true),
            };
            if re {
                slots.push((k, false));
            }
            if im {
                slots.push((k, true));
            }
        }
        Layout { n, parity, real, slots }
    }

    fn read(&self, q: &TrigPoly) -> Vec<f64> {
        self.slots
            .iter()
            .map(|&(k, imag)| if imag { q.coeff(k).im } else { q.coeff(k).re })
            .collect()
    }

    fn build(&self, x: &[f64]) -> TrigPoly {
        let mut q = TrigPoly::zero(self.n);
        for (&(k, imag), &v) in self.slots.iter().zip(x) {
            let mut c = q.coeff(k);
            if imag {
                c.im = v;
            } else {
                c.re = v;
            }
            q.set_coeff(k, c);
        }
        if matches!((self.parity, self.real), (MemberParity::Any, false)) {
            return q;
        }
        for k in 1..=self.n as i64 {
            let c = q.coeff(k);
            let mirror = match (self.parity, self.real) {
                (MemberParity::Even, _) => c,
                (MemberParity::Odd, _) => -c,
                _ => c.conj(),
            };
            q.set_coeff(-k, mirror);
        }
        q
    }
}

/// Grid estimate of `sup|Q| / λ*`, where `λ*` is the level whose sublevel set
/// has measure `2π − s`. Scale-invariant, so moves need no projection.
struct GridRatio {
    points: usize,
    rank: usize,
    buffer: Vec<f64>,
}

impl GridRatio {
    fn new(n: usize, s: f64) -> Self {
        let points = (256 * n).max(2048);
        let rank = ((((TAU - s) / TAU) * points as f64).ceil() as usize).clamp(1, points) - 1;
        GridRatio {
            points,
            rank,
            buffer: vec![0.0; points],
        }
    }

    fn eval(&mut self, q: &TrigPoly) -> f64 {
        let h = TAU / self.points as f64;
        for (i, v) in self.buffer.iter_mut().enumerate() {
            *v = q.eval(i as f64 * h).norm();
        }
        let top = self.buffer.iter().copied().fold(0.0, f64::max);
        let (_, level, _) = self.buffer.select_nth_unstable_by(self.rank, f64::total_cmp);
        let level = *level;
        if level > 0.0 {
            top / level
        } else {
            0.0
        }
    }
}

struct Restart {
    index: usize,
    poly: TrigPoly,
    ratio: f64,
    trace: Vec<(usize, f64)>,
    evaluations: usize,
}

fn unit(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn run_restart(config: &SearchConfig, index: usize, kappa: f64, bound_of: &dyn Fn(f64) -> f64) -> Result<Restart> {
    let seed = task_seed(config.seed, index as u64);
    let start = member(config.n, config.s, config.parity, config.real, seed)?;
    let layout = Layout::new(config.n, config.parity, config.real);
    let dim = layout.slots.len();
    let mut rng = stream(seed ^ 0x5eed);
    let mut grid = GridRatio::new(config.n, config.s);

    let normalise = |x: &mut Vec<f64>| {
        let m = x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if m > 0.0 {
            x.iter_mut().for_each(|v| *v /= m);
        }
    };
    let mut x = layout.read(&start);
    normalise(&mut x);
    let mut value = grid.eval(&layout.build(&x));
    let mut evaluations = 1;

    // exact check: rescale to the class, then score by the penalised sup
    let exact = |x: &[f64]| -> Option<(TrigPoly, f64)> {
        let p = tighten(&layout.build(x), config.s).ok()?;
        let d = deficiency_or_zero(&p, Backend::Eigen, 1).ok()?;
        let sup = p.sup_norm();
        let f = sup - kappa * (d - config.s).max(0.0);
        (d <= config.s + MEMBERSHIP_TOLERANCE).then(|| (p, bound_of(f)))
    };
    let (mut best_poly, mut best_ratio) = exact(&x).unwrap_or((start, 0.0));
    let mut trace = vec![(evaluations, best_ratio)];

    let mut step = config.initial_step;
    let mut directions: Vec<Vec<f64>> = Vec::with_capacity(2 * dim);
    'outer: while step >= config.min_step && evaluations < config.budget {
        directions.clear();
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            directions.push(e);
        }
        for _ in 0..dim {
            let mut d: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            unit(&mut d);
            directions.push(d);
        }
        let mut improved = false;
        for d in &directions {
            for sign in [1.0, -1.0] {
                let mut stride = step;
                loop {
                    if evaluations >= config.budget {
                        break 'outer;
                    }
                    let mut y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + sign * stride * b).collect();
                    normalise(&mut y);
                    let v = grid.eval(&layout.build(&y));
                    evaluations += 1;
                    if !(v > value) {
                        break;
                    }
                    x = y;
                    value = v;
                    improved = true;
                    stride *= 2.0;
                }
            }
        }
        if improved {
            if let Some((p, r)) = exact(&x) {
                evaluations += 1;
                if r > best_ratio {
                    best_ratio = r;
                    best_poly = p;
                    trace.push((evaluations, best_ratio));
                }
            }
        } else {
            step *= config.step_decay;
        }
    }
    if let Some((p, r)) = exact(&x) {
        if r > best_ratio {
            best_ratio = r;
            best_poly = p;
        }
    }
    trace.push((evaluations, best_ratio));
    Ok(Restart {
        index,
        poly: best_poly,
        ratio: best_ratio,
        trace,
        evaluations,
    })
}

/// Keeps at most `limit` points, always including the first and last.
fn decimate(trace: Vec<(usize, f64)>, limit: usize) -> Vec<(usize, f64)> {
    if trace.len() <= limit {
        return trace;
    }
    let last = trace.len() - 1;
    (0..limit)
        .map(|i| trace[i * last / (limit - 1)])
        .collect()
}

/// Runs all restarts in parallel, merges by (ratio descending, restart index
/// ascending), and re-verifies the winner on a denser grid with both
/// sublevel backends.
pub fn maximize_ratio(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let kappa = config.kappa_value()?;
    let (n, s, kind) = (config.n, config.s, config.kind);
    let log_bound = kind.log_bound(n, s)?;
    let bound = match kind.bound(n, s) {
        Ok(b) if b <= 1e300 => Some(b),
        _ => None,
    };
    let bound_of = move |sup: f64| match bound {
        Some(b) => sup / b,
        None => (sup.ln() - log_bound).exp(),
    };

    let runs: Vec<Result<Restart>> = (0..config.restarts)
        .into_par_iter()
        .map(|i| run_restart(config, i, kappa, &bound_of))
        .collect();
    let mut done = Vec::new();
    let mut failed = 0;
    for run in runs {
        match run {
            Ok(r) => done.push(r),
            Err(RemezError::DegenerateDraw) | Err(RemezError::NoConvergence(_)) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    let evaluations = done.iter().map(|r| r.evaluations).sum();
    done.sort_by(|a, b| match b.ratio.total_cmp(&a.ratio) {
        Ordering::Equal => a.index.cmp(&b.index),
        o => o,
    });
    let Some(best) = done.into_iter().next() else {
        return Err(RemezError::NoFeasibleStart);
    };

    // the winner must stay in the class on the denser grids
    let mut poly = best.poly;
    let mut def_eigen = deficiency_or_zero(&poly, Backend::Eigen, 1)?;
    let mut def_sample = deficiency_or_zero(&poly, Backend::Sample, VERIFY_DENSITY)?;
    if def_eigen.max(def_sample) > s + MEMBERSHIP_TOLERANCE {
        poly = tighten(&poly, s)?;
        def_eigen = deficiency_or_zero(&poly, Backend::Eigen, 1)?;
        def_sample = deficiency_or_zero(&poly, Backend::Sample, VERIFY_DENSITY)?;
    }
    let feasible = def_eigen.max(def_sample) <= s + MEMBERSHIP_TOLERANCE;
    let verified_sup = poly.sup_norm_with_density(VERIFY_DENSITY);
    let best_ratio = ratio_unchecked(&poly, n, s, kind, VERIFY_DENSITY)?;
    let violated = feasible && best_ratio > 1.0 + VIOLATION_TOLERANCE;

    let mut trace = best.trace;
    // keep the trace monotone after re-verification
    for point in trace.iter_mut() {
        point.1 = point.1.min(best_ratio);
    }
    Ok(SearchResult {
        config: config.clone(),
        best_poly: poly,
        best_ratio,
        best_restart: best.index,
        best_seed: task_seed(config.seed, best.index as u64),
        trace: decimate(trace, MAX_TRACE),
        violated,
        bound,
        log_bound,
        verified_sup,
        deficiency_eigen: def_eigen,
        deficiency_sample: def_sample,
        evaluations,
        failed_restarts: failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::extremal_even;
    use crate::sublevel::deficiency;
    use std::f64::consts::PI;

    #[test]
    fn extremal_ratio_is_one() {
        for (n, s) in [(1, PI), (3, 2.0), (4, 5.0)] {
            let r = sharpness_ratio(&extremal_even(n, s).unwrap(), s, BoundKind::EvenPeriod).unwrap();
            assert!((r - 1.0).abs() < 1e-8, "n={n} s={s}: {r}");
        }
    }

    #[test]
    fn cos_ratio_is_reciprocal_bound() {
        for s in [0.5, 2.0, 5.0] {
            let r = sharpness_ratio(&TrigPoly::cos(1, 1.0), s, BoundKind::EvenPeriod).unwrap();
            let b = BoundKind::EvenPeriod.bound(1, s).unwrap();
            assert!((r - 1.0 / b).abs() < 1e-15 && r < 1.0);
        }
    }

    #[test]
    fn ratio_requires_membership() {
        assert!(matches!(
            sharpness_ratio(&TrigPoly::cos(1, 3.0), 1.0, BoundKind::EvenPeriod),
            Err(RemezError::ConstraintViolated { .. })
        ));
    }

    #[test]
    fn layout_round_trips_and_respects_constraints() {
        for parity in [MemberParity::Even, MemberParity::Odd, MemberParity::Any] {
            for real in [false, true] {
                let q = member(3, 1.5, parity, real, 7).unwrap();
                let layout = Layout::new(3, parity, real);
                let back = layout.build(&layout.read(&q));
                assert!(back.max_coeff_diff(&q) < 1e-15, "{parity:?} {real}");
                let mut x = layout.read(&q);
                x.iter_mut().for_each(|v| *v += 0.1);
                let moved = layout.build(&x);
                let want = q.parity_of(1e-10);
                assert_eq!(moved.parity_of(1e-10), want);
                assert_eq!(moved.is_real_valued(1e-14), real);
            }
        }
    }

    #[test]
    fn decimation_keeps_the_ends() {
        let trace: Vec<(usize, f64)> = (0..5000).map(|i| (i, i as f64)).collect();
        let d = decimate(trace, 1000);
        assert_eq!(d.len(), 1000);
        assert_eq!(d[0], (0, 0.0));
        assert_eq!(d[999], (4999, 4999.0));
    }

    #[test]
    fn bad_configs_are_rejected() {
        let base = SearchConfig::default();
        for bad in [
            SearchConfig { restarts: 0, ..base.clone() },
            SearchConfig { budget: 99, ..base.clone() },
            SearchConfig { kappa: Some(0.0), ..base.clone() },
            SearchConfig { s: 7.0, ..base.clone() },
            SearchConfig { kind: BoundKind::ClassicalAlgebraic, ..base.clone() },
            SearchConfig { kind: BoundKind::AllPeriod, s: 4.0, ..base.clone() },
        ] {
            assert!(matches!(maximize_ratio(&bad), Err(RemezError::InvalidConfig(_))), "{bad:?}");
        }
    }

    #[test]
    fn small_search_is_feasible_monotone_and_reproducible() {
        let config = SearchConfig {
            n: 2,
            s: 2.0,
            restarts: 3,
            budget: 300,
            seed: 5,
            ..SearchConfig::default()
        };
        let a = maximize_ratio(&config).unwrap();
        let b = maximize_ratio(&config).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(deficiency(&a.best_poly).unwrap() <= 2.0 + MEMBERSHIP_TOLERANCE);
        assert!(a.trace.windows(2).all(|w| w[0].1 <= w[1].1 && w[0].0 <= w[1].0));
        assert!(a.best_ratio <= 1.0 + VIOLATION_TOLERANCE && !a.violated);
        assert!(a.best_ratio > 0.1);
    }
}
