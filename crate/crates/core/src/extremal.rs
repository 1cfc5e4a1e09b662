//! Polynomials that attain the sharp bounds.
//!
//! The even extremal is `Q(t) = T_{2n}(cos(t/2)·sec(s/4))`. Because `T_{2n}`
//! has only even powers, `T_{2n}(y) = S(y²)` with `deg S = n`, and
//! `y² = sec²(s/4)·(1 + cos t)/2` turns `Q` into a polynomial in `cos t`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::algpoly::AlgPoly;
use crate::chebyshev::{cheb_coeffs, cheb_t, BoundKind};
use crate::error::{RemezError, Result};
use crate::sublevel::{sublevel_set, Backend, CircleIntervalSet};
use crate::trigpoly::TrigPoly;

const VERIFY_POINTS: usize = 256;
const VERIFY_TOLERANCE: f64 = 1e-9;

/// `T_{2n}(cos(t/2)·sec(s/4))` as an even, real trigonometric polynomial of
/// degree `n`.
pub fn extremal_even(n: usize, s: f64) -> Result<TrigPoly> {
    if n == 0 {
        return Err(RemezError::domain("extremal needs n >= 1"));
    }
    BoundKind::EvenPeriod.check_domain(n, s)?;
    let sec = 1.0 / (s / 4.0).cos();
    let half_sec2 = 0.5 * sec * sec;

    // S_j: coefficient of y^{2j} in T_{2n}
    let t2n = cheb_coeffs(2 * n);
    let even: Vec<f64> = (0..=n).map(|j| t2n.coeff(2 * j).re).collect();

    // P(x) = S(half_sec2·(1 + x)) by Horner in the polynomial ring
    let mut p = vec![0.0; n + 1];
    p[0] = even[n];
    for j in (0..n).rev() {
        let mut next = vec![0.0; n + 1];
        for (i, &a) in p.iter().enumerate() {
            next[i] += half_sec2 * a;
            if i + 1 <= n {
                next[i + 1] += half_sec2 * a;
            }
        }
        next[0] += even[j];
        p = next;
    }
    let q = TrigPoly::from_cos_poly(&AlgPoly::from_real(&p));
    let q = q.even_part();
    let q = TrigPoly::from_fn(n, |k| num_complex::Complex64::new(q.coeff(k).re, 0.0));

    let scale = cheb_t(2 * n, sec)?;
    let worst = (0..VERIFY_POINTS)
        .map(|i| {
            let t = i as f64 * TAU / VERIFY_POINTS as f64;
            let direct = cheb_t(2 * n, (t / 2.0).cos() * sec).unwrap_or(f64::INFINITY);
            (q.eval(t).re - direct).abs()
        })
        .fold(0.0, f64::max);
    if !(worst <= VERIFY_TOLERANCE * scale) {
        return Err(RemezError::NoConvergence(format!(
            "extremal coefficients deviate from the closed form by {:e} relative",
            worst / scale
        )));
    }
    Ok(q)
}

/// `T_n((2x + s)/(2 − s))`: the classical extremal on `[-1, 1]`, equal to 1 in
/// modulus on `[-1, 1 − s]` and growing to the bound at `x = 1`.
pub fn extremal_classical(n: usize, s: f64) -> Result<AlgPoly> {
    if n == 0 {
        return Err(RemezError::domain("extremal needs n >= 1"));
    }
    BoundKind::ClassicalAlgebraic.check_domain(n, s)?;
    let slope = 2.0 / (2.0 - s);
    let offset = s / (2.0 - s);
    let t = cheb_coeffs(n);
    // compose T_n with slope·x + offset, Horner in the polynomial ring
    let mut out = vec![0.0; n + 1];
    out[0] = t.coeff(n).re;
    for j in (0..n).rev() {
        let mut next = vec![0.0; n + 1];
        for (i, &a) in out.iter().enumerate() {
            next[i] += offset * a;
            if i + 1 <= n {
                next[i + 1] += slope * a;
            }
        }
        next[0] += t.coeff(j).re;
        out = next;
    }
    Ok(AlgPoly::from_real(&out))
}

/// The even extremal together with the measured quantities that certify it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalWitness {
    pub n: usize,
    pub s: f64,
    pub poly: TrigPoly,
    pub bound: Option<f64>,
    pub log_bound: f64,
    pub attained_sup: Option<f64>,
    pub log_attained_sup: f64,
    /// `attained_sup / bound`, formed from the logarithms.
    pub ratio: f64,
    pub sublevel: CircleIntervalSet,
    pub sublevel_measure: f64,
}

/// Relative tolerance on `attained_sup / bound`.
pub const WITNESS_RATIO_TOLERANCE: f64 = 1e-8;
/// Absolute tolerance on the sublevel measure.
pub const WITNESS_MEASURE_TOLERANCE: f64 = 1e-6;

/// Builds the even extremal and checks that it attains the bound and has the
/// sublevel set `[s/2, 2π − s/2]`.
pub fn equality_witness(n: usize, s: f64) -> Result<ExtremalWitness> {
    let poly = extremal_even(n, s)?;
    let log_bound = BoundKind::EvenPeriod.log_bound(n, s)?;
    let log_sup = poly.log_sup_norm_with_density(1);
    let ratio = (log_sup - log_bound).exp();
    let sublevel = sublevel_set(&poly, 1.0, Backend::Eigen)?;
    let measure = sublevel.measure();
    let finite = |v: f64| if v.is_finite() && v < f64::MAX { Some(v) } else { None };
    let witness = ExtremalWitness {
        n,
        s,
        bound: BoundKind::EvenPeriod.bound(n, s).ok().and_then(finite),
        log_bound,
        attained_sup: finite(log_sup.exp()).map(|_| poly.sup_norm()),
        log_attained_sup: log_sup,
        ratio,
        sublevel,
        sublevel_measure: measure,
        poly,
    };
    let mut problems = Vec::new();
    if !((ratio - 1.0).abs() <= WITNESS_RATIO_TOLERANCE) {
        problems.push(format!("sup/bound = {ratio}"));
    }
    if !((measure - (TAU - s)).abs() <= WITNESS_MEASURE_TOLERANCE) {
        problems.push(format!("sublevel measure {measure}, expected {}", TAU - s));
    }
    if problems.is_empty() {
        Ok(witness)
    } else {
        Err(RemezError::WitnessFailure(format!(
            "n = {n}, s = {s}: {}",
            problems.join("; ")
        )))
    }
}
