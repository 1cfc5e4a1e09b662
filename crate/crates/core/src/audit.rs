//! Numerical audit of the bounds and lemmas: draw members of `𝒯ₙᶜ(s)`,
//! evaluate both sides of every inequality, and report which direction holds.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::BoundKind;
use crate::error::{RemezError, Result};
use crate::rng::{stream, task_stream};
use crate::sublevel::{cheb_measure, deficiency, sublevel_set, Backend, LineIntervalSet};
use crate::trigpoly::{Parity, TrigPoly, EVEN_TOLERANCE};

/// Slack on `deficiency(Q) ≤ s` accepted as membership in `𝒯ₙᶜ(s)`.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-6;
/// Relative slack on `sup ≤ bound` before a row is reported as a violation.
pub const RATIO_TOLERANCE: f64 = 1e-9;
/// Allowed gap between `deficiency(2|Q|² − 1)` and `deficiency(Q)`.
pub const CHAIN_TOLERANCE: f64 = 1e-6;

const REAL_TOLERANCE: f64 = 1e-12;
const RECHECK_DENSITY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberParity {
    Even,
    Odd,
    Any,
}

impl MemberParity {
    pub fn name(self) -> &'static str {
        match self {
            MemberParity::Even => "even",
            MemberParity::Odd => "odd",
            MemberParity::Any => "any",
        }
    }

    pub fn from_name(name: &str) -> Option<MemberParity> {
        match name {
            "even" => Some(MemberParity::Even),
            "odd" => Some(MemberParity::Odd),
            "any" => Some(MemberParity::Any),
            _ => None,
        }
    }
}

/// A seeded member of `𝒯ₙᶜ(s)` with complex coefficients, scaled so that its
/// deficiency sits at `s`.
pub fn random_member(n: usize, s: f64, parity: MemberParity, seed: u64) -> Result<TrigPoly> {
    member(n, s, parity, false, seed)
}

/// As [`random_member`] with real-valued polynomials (`c_{-k} = conj(c_k)`),
/// i.e. members of `𝒯ₙ(s)`.
pub fn random_real_member(n: usize, s: f64, parity: MemberParity, seed: u64) -> Result<TrigPoly> {
    member(n, s, parity, true, seed)
}

pub fn member(n: usize, s: f64, parity: MemberParity, real: bool, seed: u64) -> Result<TrigPoly> {
    if n == 0 {
        return Err(RemezError::domain("members need n >= 1"));
    }
    if !(s > 0.0 && s < TAU) {
        return Err(RemezError::domain(format!("s must lie in (0, 2π), got {s}")));
    }
    let mut rng = stream(seed);
    let raw = draw(n, parity, real, &mut rng);
    tighten(&raw, s)
}

/// Standard complex normal coefficients, symmetrised for the parity and, when
/// `real`, for real values.
pub fn draw(n: usize, parity: MemberParity, real: bool, rng: &mut impl Rng) -> TrigPoly {
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    let mut q = TrigPoly::zero(n);
    let n = n as i64;
    for k in 0..=n {
        let c = Complex64::new(normal(), normal()) / std::f64::consts::SQRT_2;
        let d = Complex64::new(normal(), normal()) / std::f64::consts::SQRT_2;
        let (ck, cmk) = match (parity, real) {
            (MemberParity::Any, false) => (c, d),
            (MemberParity::Any, true) => (c, c.conj()),
            (MemberParity::Even, false) => (c, c),
            (MemberParity::Even, true) => (Complex64::new(c.re, 0.0), Complex64::new(c.re, 0.0)),
            (MemberParity::Odd, false) => (c, -c),
            (MemberParity::Odd, true) => (Complex64::new(0.0, c.im), Complex64::new(0.0, -c.im)),
        };
        if k == 0 {
            let c0 = match (parity, real) {
                (MemberParity::Odd, _) => Complex64::new(0.0, 0.0),
                (_, true) => Complex64::new(c.re, 0.0),
                _ => c,
            };
            q.set_coeff(0, c0);
        } else {
            q.set_coeff(k, ck);
            q.set_coeff(-k, cmk);
        }
    }
    q
}

/// `Q/λ*` with `λ*` the smallest scale for which `deficiency(Q/λ) ≤ s`.
///
/// `λ ↦ deficiency(Q/λ)` is nonincreasing, so `λ*` is the root of a monotone
/// function of `log λ`. A grid quantile of `|Q|` brackets it and the Illinois
/// variant of regula falsi narrows the bracket (at most 64 steps), always
/// keeping the feasible endpoint.
pub fn tighten(q: &TrigPoly, s: f64) -> Result<TrigPoly> {
    if q.is_zero() || !(q.max_abs_coeff() > 1e-300) || !q.max_abs_coeff().is_finite() {
        return Err(RemezError::DegenerateDraw);
    }
    let excess = |u: f64| -> Result<f64> {
        match sublevel_set(q, u.exp(), Backend::Eigen) {
            Ok(set) => Ok(TAU - set.measure() - s),
            Err(RemezError::ConstantOnLevel) => Ok(-s),
            Err(e) => Err(e),
        }
    };

    let points = 256 * q.degree().max(1);
    let mut values: Vec<f64> = (0..points)
        .map(|i| q.eval(i as f64 * TAU / points as f64).norm())
        .collect();
    values.sort_by(f64::total_cmp);
    let rank = (((TAU - s) / TAU) * points as f64) as usize;
    let guess = values[rank.min(points - 1)];
    let top = values[points - 1];
    if !(top > 0.0) {
        return Err(RemezError::DegenerateDraw);
    }
    let guess = if guess > 0.0 { guess } else { top * 1e-3 };

    let (mut a, mut b) = (guess.ln() - 0.05, guess.ln() + 0.05);
    let mut fb = excess(b)?;
    let mut expansions = 0;
    while fb > 0.0 {
        a = b;
        b += 0.7;
        fb = excess(b)?;
        expansions += 1;
        if expansions > 200 {
            return Err(RemezError::NoConvergence("no feasible scale".into()));
        }
    }
    let mut fa = excess(a)?;
    while fa <= 0.0 {
        b = a;
        fb = fa;
        a -= 0.7;
        fa = excess(a)?;
        expansions += 1;
        if expansions > 200 {
            // |Q| ≤ λ on a set of measure ≥ 2π − s for every λ > 0: Q has a
            // zero set of positive measure, which only the zero polynomial has
            return Err(RemezError::DegenerateDraw);
        }
    }

    let mut side = 0;
    for _ in 0..64 {
        if b - a <= 1e-14 * (1.0 + b.abs()) || fb > -1e-12 {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = excess(c)?;
        if fc <= 0.0 {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }

    // Q/λ rounds slightly differently from the level-λ set, so confirm
    let mut lambda = b.exp();
    for _ in 0..8 {
        let member = q.scale(1.0 / lambda);
        match deficiency(&member) {
            Ok(d) if d <= s + MEMBERSHIP_TOLERANCE => return Ok(member),
            Err(RemezError::ConstantOnLevel) => return Ok(member),
            Err(e) => return Err(e),
            Ok(_) => lambda *= 1.0 + 1e-9,
        }
    }
    Err(RemezError::NoConvergence("rescaled member misses its deficiency".into()))
}

/// Parameters recorded with each report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditInputs {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parity: Option<MemberParity>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub real: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub set: Option<Vec<(f64, f64)>>,
}

/// One evaluated claim.
///
/// For `≤` claims `margin = 1 − lhs/rhs` and the claim holds when
/// `margin ≥ −RATIO_TOLERANCE`; for strict `>` claims `margin = lhs − rhs`
/// and the claim holds when `margin > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub claim_id: String,
    pub inputs: AuditInputs,
    pub lhs: f64,
    pub rhs: f64,
    pub holds_as_stated: bool,
    pub margin: f64,
    pub notes: String,
}

impl AuditReport {
    fn at_most(claim: &str, inputs: AuditInputs, lhs: f64, rhs: f64, notes: String) -> Self {
        let margin = 1.0 - lhs / rhs;
        AuditReport {
            claim_id: claim.into(),
            inputs,
            lhs,
            rhs,
            holds_as_stated: margin >= -RATIO_TOLERANCE,
            margin,
            notes,
        }
    }

    fn greater(claim: &str, inputs: AuditInputs, lhs: f64, rhs: f64, notes: String) -> Self {
        let margin = lhs - rhs;
        AuditReport {
            claim_id: claim.into(),
            inputs,
            lhs,
            rhs,
            holds_as_stated: margin > 0.0,
            margin,
            notes,
        }
    }
}

fn require_member(q: &TrigPoly, s: f64) -> Result<()> {
    let d = deficiency(q)?;
    if d > s + MEMBERSHIP_TOLERANCE {
        return Err(RemezError::ConstraintViolated { deficiency: d, s });
    }
    Ok(())
}

fn require_parity(q: &TrigPoly, want: Parity) -> Result<()> {
    let got = q.parity_of(EVEN_TOLERANCE);
    if got != want {
        return Err(RemezError::domain(format!("expected a {want:?} polynomial, got {got:?}")));
    }
    Ok(())
}

fn member_inputs(q: &TrigPoly, s: f64) -> AuditInputs {
    AuditInputs {
        n: Some(q.degree()),
        s: Some(s),
        real: Some(q.is_real_valued(REAL_TOLERANCE)),
        ..AuditInputs::default()
    }
}

/// `sup|Q|` against a bound, with a denser re-check before reporting a
/// violation and a log-domain comparison when the bound overflows.
fn sup_against(claim: &str, q: &TrigPoly, kind: BoundKind, s: f64, inputs: AuditInputs) -> Result<AuditReport> {
    let n = q.degree();
    match kind.bound(n, s) {
        Ok(bound) => {
            let mut sup = q.sup_norm();
            let mut notes = String::new();
            if sup > bound * (1.0 + RATIO_TOLERANCE) {
                sup = q.sup_norm_with_density(RECHECK_DENSITY);
                notes = format!("rechecked at {RECHECK_DENSITY}x grid density");
            }
            Ok(AuditReport::at_most(claim, inputs, sup, bound, notes))
        }
        Err(RemezError::Overflow) => {
            let log_bound = kind.log_bound(n, s)?;
            let log_sup = q.log_sup_norm_with_density(RECHECK_DENSITY);
            let margin = 1.0 - (log_sup - log_bound).exp();
            Ok(AuditReport {
                claim_id: claim.into(),
                inputs,
                lhs: log_sup,
                rhs: log_bound,
                holds_as_stated: margin >= -RATIO_TOLERANCE,
                margin,
                notes: "log-domain: lhs and rhs are natural logarithms".into(),
            })
        }
        Err(e) => Err(e),
    }
}

/// `max|Q| ≤ T_{2n}(sec(s/4))` for even members.
pub fn audit_theorem_2_1(q: &TrigPoly, s: f64) -> Result<AuditReport> {
    BoundKind::EvenPeriod.check_domain(q.degree(), s)?;
    require_parity(q, Parity::Even)?;
    require_member(q, s)?;
    sup_against("Thm2.1", q, BoundKind::EvenPeriod, s, member_inputs(q, s))
}

/// `max|Q| ≤ T_{2n}(sec(s/4)) + 1/√2` for odd members.
pub fn audit_theorem_2_2(q: &TrigPoly, s: f64) -> Result<AuditReport> {
    BoundKind::OddPeriod.check_domain(q.degree(), s)?;
    require_parity(q, Parity::Odd)?;
    require_member(q, s)?;
    sup_against("Thm2.2", q, BoundKind::OddPeriod, s, member_inputs(q, s))
}

/// The reduction behind the odd bound: `R = 2|Q|² − 1` is even, real, of
/// degree `2n`, and has the same deficiency as `Q`.
///
/// `lhs` is the largest of the relative coefficient asymmetry of `R`, its
/// relative departure from real values and `|deficiency(R) − deficiency(Q)|`;
/// `rhs` is [`CHAIN_TOLERANCE`].
pub fn audit_theorem_2_2_chain(q: &TrigPoly) -> Result<AuditReport> {
    let r = q.abs_squared().scale(2.0).sub_constant(1.0);
    let scale = r.max_abs_coeff().max(f64::MIN_POSITIVE);
    let m = r.degree() as i64;
    let asymmetry = (0..=m)
        .map(|k| (r.coeff(k) - r.coeff(-k)).norm())
        .fold(0.0, f64::max)
        / scale;
    let nonreal = (0..=m)
        .map(|k| (r.coeff(-k) - r.coeff(k).conj()).norm())
        .fold(0.0, f64::max)
        / scale;
    let dq = deficiency(q)?;
    let dr = deficiency(&r)?;
    let gap = (dr - dq).abs();
    let lhs = asymmetry.max(nonreal).max(gap);
    let mut notes = format!(
        "degree {} (expected {}), deficiency {dq} vs {dr}",
        r.degree(),
        2 * q.degree()
    );
    if r.degree() != 2 * q.degree() {
        notes.push_str("; degree mismatch");
    }
    let mut report = AuditReport::at_most(
        "Thm2.2-chain",
        member_inputs(q, dq),
        lhs,
        CHAIN_TOLERANCE,
        notes,
    );
    if r.degree() != 2 * q.degree() {
        report.holds_as_stated = false;
    }
    Ok(report)
}

/// `max|R| ≤ T_{2n}(sec(s/2))` for every member, `s ∈ (0, π)`.
pub fn audit_theorem_2_3(r: &TrigPoly, s: f64) -> Result<AuditReport> {
    BoundKind::AllPeriod.check_domain(r.degree(), s)?;
    require_member(r, s)?;
    sup_against("Thm2.3", r, BoundKind::AllPeriod, s, member_inputs(r, s))
}

/// `|Q(0)| ≤ T_{2n}(sec(s/4))` for even members: `Lem3.1` when `Q` is
/// real-valued, `Lem3.2` otherwise.
pub fn audit_lemma_3_1_or_3_2(q: &TrigPoly, s: f64) -> Result<AuditReport> {
    BoundKind::EvenPeriod.check_domain(q.degree(), s)?;
    require_parity(q, Parity::Even)?;
    require_member(q, s)?;
    let claim = if q.is_real_valued(REAL_TOLERANCE) { "Lem3.1" } else { "Lem3.2" };
    let bound = BoundKind::EvenPeriod.bound(q.degree(), s)?;
    Ok(AuditReport::at_most(claim, member_inputs(q, s), q.eval(0.0).norm(), bound, String::new()))
}

/// Which statement of the Chebyshev-measure comparison to audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureLemma {
    /// `μ_[1−2r,1](A) > √r·μ_[−1,1](A)` for `A ⊂ [1−2r, 1]`.
    Right,
    /// `μ_[−1,1−2r](A) > √(1−r)·μ_[−1,1](A)` for `A ⊂ [−1, 1−2r]`, the reading
    /// used in the main proof.
    Left,
    /// The same inequality with the displayed host `A ⊂ [−1, −1+2r]`,
    /// intersected with `[−1, 1−2r]` so the left side is defined.
    LeftLiteral,
}

impl MeasureLemma {
    pub fn claim_id(self) -> &'static str {
        match self {
            MeasureLemma::Right => "Lem3.5",
            MeasureLemma::Left => "Lem3.6",
            MeasureLemma::LeftLiteral => "Lem3.6-literal",
        }
    }

    /// The interval `A` must lie in.
    pub fn host(self, r: f64) -> (f64, f64) {
        match self {
            MeasureLemma::Right => (1.0 - 2.0 * r, 1.0),
            MeasureLemma::Left => (-1.0, 1.0 - 2.0 * r),
            MeasureLemma::LeftLiteral => (-1.0, (-1.0 + 2.0 * r).min(1.0 - 2.0 * r)),
        }
    }
}

pub fn audit_lemma_3_5_or_3_6(r: f64, set: &LineIntervalSet, which: MeasureLemma) -> Result<AuditReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(RemezError::domain(format!("r must lie in (0, 1), got {r}")));
    }
    if !(set.measure() > 0.0) {
        return Err(RemezError::domain("the set must have positive measure"));
    }
    let (lo, hi) = which.host(r);
    if let Some(&(a, b)) = set.arcs().iter().find(|&&(a, b)| a < lo || b > hi) {
        return Err(RemezError::domain(format!("[{a}, {b}] leaves the host [{lo}, {hi}]")));
    }
    let (measure_host, factor) = match which {
        MeasureLemma::Right => ((1.0 - 2.0 * r, 1.0), r.sqrt()),
        MeasureLemma::Left | MeasureLemma::LeftLiteral => ((-1.0, 1.0 - 2.0 * r), (1.0 - r).sqrt()),
    };
    let lhs = cheb_measure(measure_host.0, measure_host.1, set)?;
    let rhs = factor * cheb_measure(-1.0, 1.0, set)?;
    let inputs = AuditInputs {
        r: Some(r),
        set: Some(set.arcs().to_vec()),
        ..AuditInputs::default()
    };
    Ok(AuditReport::greater(which.claim_id(), inputs, lhs, rhs, String::new()))
}

/// Both displayed inequalities `arccos(1−2r) > π√r` and
/// `π − arccos(1−2r) > π√(1−r)`, each with the direction that actually holds
/// recorded in the notes.
pub fn audit_lemma_3_7(r: f64) -> Result<(AuditReport, AuditReport)> {
    if !(r > 0.0 && r < 1.0) {
        return Err(RemezError::domain(format!("r must lie in (0, 1), got {r}")));
    }
    let angle = (1.0 - 2.0 * r).acos();
    let inputs = AuditInputs {
        r: Some(r),
        ..AuditInputs::default()
    };
    let direction = |lhs: f64, rhs: f64| {
        if lhs > rhs {
            "stated direction holds"
        } else if lhs < rhs {
            "reversed direction holds"
        } else {
            "equality"
        }
        .to_string()
    };
    let (l1, r1) = (angle, PI * r.sqrt());
    let (l2, r2) = (PI - angle, PI * (1.0 - r).sqrt());
    Ok((
        AuditReport::greater("Lem3.7a", inputs.clone(), l1, r1, direction(l1, r1)),
        AuditReport::greater("Lem3.7b", inputs, l2, r2, direction(l2, r2)),
    ))
}

/// Sampling grid for one family of member audits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberGrid {
    pub count: usize,
    pub max_degree: usize,
    pub s_min: f64,
    pub s_max: f64,
}

/// Which families to run and how densely. Families: `Thm2.1` (with
/// `Lem3.1`/`Lem3.2` on the same members), `Thm2.2` (with `Thm2.2-chain`),
/// `Thm2.3`, `Lem3.5`, `Lem3.6`, `Lem3.6-literal`, `Lem3.7`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuditConfig {
    pub seed: u64,
    pub families: Vec<String>,
    pub theorem_2_1: MemberGrid,
    pub theorem_2_2: MemberGrid,
    pub theorem_2_3: MemberGrid,
    pub lemma_sets: usize,
    pub lemma_3_7_r: Vec<f64>,
}

pub const FAMILIES: [&str; 7] = ["Thm2.1", "Thm2.2", "Thm2.3", "Lem3.5", "Lem3.6", "Lem3.6-literal", "Lem3.7"];

impl Default for AuditConfig {
    fn default() -> Self {
        let mut r_grid = vec![0.01];
        r_grid.extend((1..=19).map(|i| i as f64 * 0.05));
        r_grid.push(0.99);
        AuditConfig {
            seed: 1,
            families: FAMILIES.iter().map(|f| f.to_string()).collect(),
            theorem_2_1: MemberGrid {
                count: 10_000,
                max_degree: 6,
                s_min: 0.25,
                s_max: 5.5,
            },
            theorem_2_2: MemberGrid {
                count: 2_000,
                max_degree: 4,
                s_min: 0.25,
                s_max: 5.5,
            },
            theorem_2_3: MemberGrid {
                count: 10_000,
                max_degree: 6,
                s_min: 0.1,
                s_max: 3.0,
            },
            lemma_sets: 10_000,
            lemma_3_7_r: r_grid,
        }
    }
}

impl AuditConfig {
    /// A configuration that produces no reports.
    pub fn empty(seed: u64) -> Self {
        AuditConfig {
            seed,
            families: Vec::new(),
            ..AuditConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for f in &self.families {
            if !FAMILIES.contains(&f.as_str()) {
                return Err(RemezError::InvalidConfig(format!("unknown audit family {f}")));
            }
        }
        for (name, grid, hi) in [
            ("theorem_2_1", &self.theorem_2_1, TAU),
            ("theorem_2_2", &self.theorem_2_2, TAU),
            ("theorem_2_3", &self.theorem_2_3, PI),
        ] {
            if grid.count > 0
                && (grid.max_degree == 0 || !(grid.s_min > 0.0 && grid.s_min <= grid.s_max && grid.s_max < hi))
            {
                return Err(RemezError::InvalidConfig(format!("{name}: bad degree or s range")));
            }
        }
        if self.lemma_3_7_r.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(RemezError::InvalidConfig("lemma_3_7_r values must lie in (0, 1)".into()));
        }
        Ok(())
    }

    fn runs(&self, family: &str) -> bool {
        self.families.iter().any(|f| f == family)
    }
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Even(usize),
    Odd(usize),
    All,
    Set(MeasureLemma),
    Arcs(f64),
}

/// Runs every configured audit in parallel. Each task draws from its own
/// stream keyed by `(seed, task index)` and the reports come back in task
/// order, so the output does not depend on scheduling.
pub fn audit_sweep(config: &AuditConfig) -> Result<Vec<AuditReport>> {
    config.validate()?;
    let mut tasks = Vec::new();
    if config.runs("Thm2.1") {
        tasks.extend((0..config.theorem_2_1.count).map(Task::Even));
    }
    if config.runs("Thm2.2") {
        tasks.extend((0..config.theorem_2_2.count).map(Task::Odd));
    }
    if config.runs("Thm2.3") {
        tasks.extend((0..config.theorem_2_3.count).map(|_| Task::All));
    }
    for which in [MeasureLemma::Right, MeasureLemma::Left, MeasureLemma::LeftLiteral] {
        if config.runs(which.claim_id()) {
            tasks.extend((0..config.lemma_sets).map(|_| Task::Set(which)));
        }
    }
    if config.runs("Lem3.7") {
        tasks.extend(config.lemma_3_7_r.iter().map(|&r| Task::Arcs(r)));
    }
    let per_task: Vec<Result<Vec<AuditReport>>> = tasks
        .par_iter()
        .enumerate()
        .map(|(index, &task)| run_task(config, index as u64, task))
        .collect();
    let mut out = Vec::new();
    for reports in per_task {
        out.extend(reports?);
    }
    Ok(out)
}

fn run_task(config: &AuditConfig, index: u64, task: Task) -> Result<Vec<AuditReport>> {
    let mut rng = task_stream(config.seed, index);
    let mut draw_member = |grid: &MemberGrid, parity: MemberParity, real: bool| -> Result<(TrigPoly, AuditInputs)> {
        let n = rng.random_range(1..=grid.max_degree);
        let s = if grid.s_min < grid.s_max {
            rng.random_range(grid.s_min..grid.s_max)
        } else {
            grid.s_min
        };
        let seed: u64 = rng.random();
        let q = member(n, s, parity, real, seed)?;
        let inputs = AuditInputs {
            n: Some(n),
            s: Some(s),
            parity: Some(parity),
            real: Some(real),
            seed: Some(seed),
            ..AuditInputs::default()
        };
        Ok((q, inputs))
    };
    let reports = match task {
        Task::Even(i) => {
            let real = i % 2 == 0;
            let (q, inputs) = draw_member(&config.theorem_2_1, MemberParity::Even, real)?;
            let s = inputs.s.unwrap_or_default();
            let mut main = audit_theorem_2_1(&q, s)?;
            let mut point = audit_lemma_3_1_or_3_2(&q, s)?;
            main.inputs = inputs.clone();
            point.inputs = inputs;
            vec![main, point]
        }
        Task::Odd(i) => {
            let real = i % 2 == 0;
            let (q, inputs) = draw_member(&config.theorem_2_2, MemberParity::Odd, real)?;
            let s = inputs.s.unwrap_or_default();
            let mut main = audit_theorem_2_2(&q, s)?;
            let mut chain = audit_theorem_2_2_chain(&q)?;
            main.inputs = inputs.clone();
            chain.inputs = inputs;
            vec![main, chain]
        }
        Task::All => {
            let (q, inputs) = draw_member(&config.theorem_2_3, MemberParity::Any, false)?;
            let s = inputs.s.unwrap_or_default();
            let mut main = audit_theorem_2_3(&q, s)?;
            main.inputs = inputs;
            vec![main]
        }
        Task::Set(which) => {
            let r = loop {
                let r: f64 = rng.random();
                if r > 0.0 {
                    break r;
                }
            };
            let (lo, hi) = which.host(r);
            if !(hi > lo) {
                // r = 1/2 exactly leaves the literal host a single point
                return Ok(Vec::new());
            }
            let set = LineIntervalSet::random(&mut rng, lo, hi)?;
            vec![audit_lemma_3_5_or_3_6(r, &set, which)?]
        }
        Task::Arcs(r) => {
            let (a, b) = audit_lemma_3_7(r)?;
            vec![a, b]
        }
    };
    Ok(reports)
}

/// Row and violation counts for one claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim_id: String,
    pub total: usize,
    pub violations: usize,
}

/// Counts per claim id, in first-appearance order.
pub fn summarize(reports: &[AuditReport]) -> Vec<ClaimSummary> {
    let mut out: Vec<ClaimSummary> = Vec::new();
    for r in reports {
        let entry = match out.iter_mut().position(|c| c.claim_id == r.claim_id) {
            Some(i) => &mut out[i],
            None => {
                out.push(ClaimSummary {
                    claim_id: r.claim_id.clone(),
                    total: 0,
                    violations: 0,
                });
                out.last_mut().expect("just pushed")
            }
        };
        entry.total += 1;
        if !r.holds_as_stated {
            entry.violations += 1;
        }
    }
    out
}

/// Full sweep output: configuration echo, per-claim counts and every row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub config: AuditConfig,
    pub summary: Vec<ClaimSummary>,
    pub reports: Vec<AuditReport>,
}

impl AuditOutcome {
    pub fn run(config: &AuditConfig) -> Result<Self> {
        let reports = audit_sweep(config)?;
        Ok(AuditOutcome {
            config: config.clone(),
            summary: summarize(&reports),
            reports,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit outcome serialises")
    }

    /// Claim ids with at least one row that fails as stated.
    pub fn findings(&self) -> Vec<String> {
        self.summary
            .iter()
            .filter(|c| c.violations > 0)
            .map(|c| c.claim_id.clone())
            .collect()
    }
}

/// CSV with columns `claim_id,inputs,lhs,rhs,holds_as_stated,margin,notes`;
/// `inputs` holds the compact JSON of the parameter record.
pub fn reports_to_csv(reports: &[AuditReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| RemezError::Parse(e.to_string());
    w.write_record(["claim_id", "inputs", "lhs", "rhs", "holds_as_stated", "margin", "notes"])
        .map_err(io)?;
    for r in reports {
        let inputs = serde_json::to_string(&r.inputs).map_err(|e| RemezError::Parse(e.to_string()))?;
        w.write_record([
            r.claim_id.clone(),
            inputs,
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.holds_as_stated.to_string(),
            r.margin.to_string(),
            r.notes.clone(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| RemezError::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| RemezError::Parse(e.to_string()))
}
