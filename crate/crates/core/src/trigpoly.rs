//! Complex trigonometric polynomials on the period `K = ℝ mod 2π`.
//!
//! A [`TrigPoly`] of degree `n` stores the `2n + 1` coefficients of
//! `Q(t) = Σ_{k=-n}^{n} c_k e^{ikt}`. Working in the exponential basis makes
//! parity, shifts and `|Q|^2` exact coefficient operations; the cosine/sine
//! view is only produced on demand (see [`TrigPoly::to_cos_poly`]).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algpoly::AlgPoly;
use crate::chebyshev::chebyshev_table;
use crate::error::{RemezError, Result};

/// Relative asymmetry accepted by [`TrigPoly::to_cos_poly`].
pub const EVEN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl TrigPoly {
    /// Builds from `c_{-n}, …, c_n`. The length must be odd.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(RemezError::Parse(format!(
                "expected 2n+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(TrigPoly { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        TrigPoly {
            coeffs: vec![ZERO; 2 * degree + 1],
        }
    }

    /// Degree-`n` polynomial with `c_k = f(k)`.
    pub fn from_fn(degree: usize, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let n = degree as i64;
        TrigPoly {
            coeffs: (-n..=n).map(&mut f).collect(),
        }
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly {
            coeffs: vec![Complex64::new(c, 0.0)],
        }
    }

    /// `c · e^{ikt}` as a polynomial of degree `|k|`.
    pub fn monomial(k: i64, c: Complex64) -> Self {
        let mut q = TrigPoly::zero(k.unsigned_abs() as usize);
        q.set_coeff(k, c);
        q
    }

    /// `amp · cos(kt)`.
    pub fn cos(k: i64, amp: f64) -> Self {
        let k = k.abs();
        let mut q = TrigPoly::zero(k as usize);
        if k == 0 {
            q.set_coeff(0, Complex64::new(amp, 0.0));
        } else {
            q.set_coeff(k, Complex64::new(amp / 2.0, 0.0));
            q.set_coeff(-k, Complex64::new(amp / 2.0, 0.0));
        }
        q
    }

    /// `amp · sin(kt)`.
    pub fn sin(k: i64, amp: f64) -> Self {
        let mut q = TrigPoly::zero(k.unsigned_abs() as usize);
        if k != 0 {
            q.set_coeff(k, Complex64::new(0.0, -amp / 2.0));
            q.set_coeff(-k, Complex64::new(0.0, amp / 2.0));
        }
        q
    }

    pub fn degree(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Coefficients `c_{-n}, …, c_n`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_k`, zero outside `-n..=n`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.degree() as i64;
        if k.abs() > n {
            ZERO
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    /// Panics if `|k|` exceeds the degree.
    pub fn set_coeff(&mut self, k: i64, c: Complex64) {
        let n = self.degree() as i64;
        assert!(k.abs() <= n, "coefficient index {k} outside degree {n}");
        self.coeffs[(k + n) as usize] = c;
    }

    /// Same polynomial stored with a larger degree.
    pub fn padded(&self, degree: usize) -> TrigPoly {
        let degree = degree.max(self.degree());
        TrigPoly::from_fn(degree, |k| self.coeff(k))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn scale(&self, factor: f64) -> TrigPoly {
        TrigPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let degree = self.degree().max(other.degree());
        TrigPoly::from_fn(degree, |k| self.coeff(k) + other.coeff(k))
    }

    /// `Q - c` for a real constant `c`.
    pub fn sub_constant(&self, c: f64) -> TrigPoly {
        let mut q = self.clone();
        let c0 = q.coeff(0);
        q.set_coeff(0, c0 - c);
        q
    }

    /// Largest coefficientwise distance, padding the shorter operand with zeros.
    pub fn max_coeff_diff(&self, other: &TrigPoly) -> f64 {
        let n = self.degree().max(other.degree()) as i64;
        (-n..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// `Q(t) = Σ c_k e^{ikt}` by Horner's rule in `z = e^{it}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let n = self.degree() as f64;
        let z = Complex64::cis(t);
        let p = self
            .coeffs
            .iter()
            .rev()
            .fold(ZERO, |acc, &c| acc * z + c);
        p * Complex64::cis(-n * t)
    }

    /// `(Q(t), Q'(t))`.
    pub fn eval_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        let n = self.degree() as f64;
        let z = Complex64::cis(t);
        let (mut p, mut dp) = (ZERO, ZERO);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        let phase = Complex64::cis(-n * t);
        let i = Complex64::i();
        let value = p * phase;
        // d/dt [z^{-n} p(z)] = i z^{-n} (z p'(z) - n p(z))
        let deriv = i * phase * (z * dp - p * n);
        (value, deriv)
    }

    /// `|Q(t)|^2` and its derivative in `t`.
    pub fn abs2_with_derivative(&self, t: f64) -> (f64, f64) {
        let (q, dq) = self.eval_with_derivative(t);
        (q.norm_sqr(), 2.0 * (q.conj() * dq).re)
    }

    /// `max_{t ∈ K} |Q(t)|` with the default grid density.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_with_density(1)
    }

    /// `max_t |Q(t)|` on a grid of `density · max(64·n, 256)` points, refined
    /// by golden-section search around every grid maximum that could still
    /// be the global one.
    pub fn sup_norm_with_density(&self, density: usize) -> f64 {
        self.argmax_with_density(density).1
    }

    /// Location and value of the sup norm.
    pub fn argmax_with_density(&self, density: usize) -> (f64, f64) {
        let n = self.degree().max(1);
        let points = (64 * n).max(256) * density.max(1);
        let h = TAU / points as f64;
        let values: Vec<f64> = (0..points)
            .map(|i| self.eval(i as f64 * h).norm_sqr())
            .collect();
        let best = values.iter().copied().fold(0.0, f64::max);
        if best == 0.0 {
            return (0.0, 0.0);
        }
        // Bernstein: (|Q|^2)'' ≤ (2n)^2 max|Q|^2, so a grid maximum more than
        // this far below the best one cannot overtake it after refinement.
        let slack = 2.0 * (2.0 * n as f64 * h / 2.0).powi(2);
        let threshold = best * (1.0 - slack);
        let mut arg = 0.0;
        let mut sup2 = 0.0_f64;
        for i in 0..points {
            let prev = values[(i + points - 1) % points];
            let next = values[(i + 1) % points];
            let v = values[i];
            if v < prev || v < next || v < threshold {
                continue;
            }
            let centre = i as f64 * h;
            let (t, val) = golden_max(|t| self.eval(t).norm_sqr(), centre - h, centre + h);
            let (t, val) = if v > val { (centre, v) } else { (t, val) };
            if val > sup2 {
                sup2 = val;
                arg = t;
            }
        }
        (arg.rem_euclid(TAU), sup2.sqrt())
    }

    /// `log max_t |Q(t)|`, evaluated on the polynomial divided by its largest
    /// coefficient so it stays finite when the coefficients are huge.
    pub fn log_sup_norm_with_density(&self, density: usize) -> f64 {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return f64::NEG_INFINITY;
        }
        scale.ln() + self.scale(1.0 / scale).sup_norm_with_density(density).ln()
    }

    /// `(c_k + c_{-k}) / 2`.
    pub fn even_part(&self) -> TrigPoly {
        TrigPoly::from_fn(self.degree(), |k| (self.coeff(k) + self.coeff(-k)) / 2.0)
    }

    /// `(c_k - c_{-k}) / 2`.
    pub fn odd_part(&self) -> TrigPoly {
        TrigPoly::from_fn(self.degree(), |k| (self.coeff(k) - self.coeff(-k)) / 2.0)
    }

    /// `|Q|^2` as a real trigonometric polynomial of degree `2n`:
    /// `d_m = Σ_k c_k conj(c_{k-m})`.
    pub fn abs_squared(&self) -> TrigPoly {
        let n = self.degree() as i64;
        let mut out = TrigPoly::zero(2 * n as usize);
        for m in 0..=2 * n {
            let lo = (m - n).max(-n);
            let mut d = ZERO;
            for k in lo..=n {
                d += self.coeff(k) * self.coeff(k - m).conj();
            }
            if m == 0 {
                d.im = 0.0;
            }
            out.set_coeff(m, d);
            out.set_coeff(-m, d.conj());
        }
        out
    }

    /// `R_a(t) = R(t + a)`: `c_k ↦ c_k e^{ika}`.
    pub fn shift(&self, a: f64) -> TrigPoly {
        TrigPoly::from_fn(self.degree(), |k| self.coeff(k) * Complex64::cis(k as f64 * a))
    }

    /// Classifies by coefficient symmetry relative to the largest coefficient.
    /// The zero polynomial is reported as even.
    pub fn parity_of(&self, tol: f64) -> Parity {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return Parity::Even;
        }
        let n = self.degree() as i64;
        let asym = |sign: f64| {
            (0..=n)
                .map(|k| (self.coeff(k) - self.coeff(-k) * sign).norm())
                .fold(0.0, f64::max)
        };
        if asym(1.0) <= tol * scale {
            Parity::Even
        } else if asym(-1.0) <= tol * scale {
            Parity::Odd
        } else {
            Parity::Neither
        }
    }

    /// Whether `c_{-k} = conj(c_k)` to within `tol` relative.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let scale = self.max_abs_coeff().max(f64::MIN_POSITIVE);
        let n = self.degree() as i64;
        (0..=n).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol * scale)
    }

    /// `P` with `Q(t) = P(cos t)`; requires `Q` even.
    pub fn to_cos_poly(&self) -> Result<AlgPoly> {
        let scale = self.max_abs_coeff();
        let n = self.degree() as i64;
        let asymmetry = (1..=n)
            .map(|k| (self.coeff(k) - self.coeff(-k)).norm())
            .fold(0.0, f64::max);
        if asymmetry > EVEN_TOLERANCE * scale {
            return Err(RemezError::NotEven {
                asymmetry: asymmetry / scale,
            });
        }
        let table = chebyshev_table(n as usize);
        let mut out = vec![ZERO; n as usize + 1];
        out[0] = self.coeff(0);
        for k in 1..=n {
            // c_k e^{ikt} + c_{-k} e^{-ikt} = (c_k + c_{-k}) T_k(cos t) for even Q
            let weight = self.coeff(k) + self.coeff(-k);
            for (j, &tk) in table[k as usize].iter().enumerate() {
                out[j] += weight * tk;
            }
        }
        Ok(AlgPoly::new(out))
    }

    /// The even polynomial `Q(t) = P(cos t)`.
    pub fn from_cos_poly(p: &AlgPoly) -> TrigPoly {
        let n = p.degree();
        let table = chebyshev_table(n);
        let mut rest: Vec<Complex64> = p.coeffs().to_vec();
        let mut cheb = vec![ZERO; n + 1];
        for k in (0..=n).rev() {
            let lead = table[k][k];
            let b = rest[k] / lead;
            cheb[k] = b;
            for (j, &tk) in table[k].iter().enumerate() {
                rest[j] -= b * tk;
            }
        }
        TrigPoly::from_fn(n, |k| {
            if k == 0 {
                cheb[0]
            } else {
                cheb[k.unsigned_abs() as usize] / 2.0
            }
        })
    }
}

/// Golden-section maximisation on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    k: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    degree: usize,
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.degree() as i64;
        PolyJson {
            degree: self.degree(),
            coeffs: (-n..=n)
                .map(|k| {
                    let c = self.coeff(k);
                    CoeffEntry { k, re: c.re, im: c.im }
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        TrigPoly::try_from_json(raw).map_err(serde::de::Error::custom)
    }
}

impl TrigPoly {
    fn try_from_json(raw: PolyJson) -> Result<Self> {
        let n = raw.degree as i64;
        if raw.coeffs.len() as i64 != 2 * n + 1 {
            return Err(RemezError::Parse(format!(
                "degree {n} needs {} coefficients, got {}",
                2 * n + 1,
                raw.coeffs.len()
            )));
        }
        let mut out = Vec::with_capacity(raw.coeffs.len());
        for (expected, entry) in (-n..=n).zip(&raw.coeffs) {
            if entry.k != expected {
                return Err(RemezError::Parse(format!(
                    "expected coefficient k = {expected}, found k = {} (duplicate, missing or unsorted)",
                    entry.k
                )));
            }
            if !entry.re.is_finite() || !entry.im.is_finite() {
                return Err(RemezError::Parse(format!("non-finite coefficient at k = {}", entry.k)));
            }
            out.push(Complex64::new(entry.re, entry.im));
        }
        Ok(TrigPoly { coeffs: out })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolyJson = serde_json::from_str(text).map_err(|e| RemezError::Parse(e.to_string()))?;
        TrigPoly::try_from_json(raw)
    }
}

/// `t` reduced to `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn arb_poly(max_degree: usize) -> impl Strategy<Value = TrigPoly> {
        (0..=max_degree).prop_flat_map(|n| {
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2 * n + 1).prop_map(|v| {
                TrigPoly::new(v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap()
            })
        })
    }

    #[test]
    fn eval_basic_cases() {
        assert!(close(TrigPoly::cos(1, 1.0).eval(0.0), c(1.0, 0.0), 1e-15));
        assert!(close(TrigPoly::monomial(1, c(1.0, 0.0)).eval(FRAC_PI_2), c(0.0, 1.0), 1e-15));
        let q = TrigPoly::sin(2, 1.0);
        assert!(close(q.eval(0.3), c((0.6f64).sin(), 0.0), 1e-15));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let q = TrigPoly::new(vec![c(0.3, -0.1), c(1.0, 0.2), c(-0.5, 0.7), c(0.1, 0.1), c(0.2, -0.4)]).unwrap();
        let t = 0.77;
        let h = 1e-6;
        let fd = (q.eval(t + h) - q.eval(t - h)) / (2.0 * h);
        let (_, d) = q.eval_with_derivative(t);
        assert!(close(fd, d, 1e-8));
    }

    #[test]
    fn sup_norm_simple() {
        assert!((TrigPoly::cos(1, 1.0).sup_norm() - 1.0).abs() < 1e-12);
        assert!((TrigPoly::monomial(2, c(3.0, 0.0)).sup_norm() - 3.0).abs() < 1e-12);
        // 1 + 2cos t peaks at t = 0 with value 3
        let q = TrigPoly::constant(1.0).add(&TrigPoly::cos(1, 2.0));
        assert!((q.sup_norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_finds_narrow_off_grid_peak() {
        // peak of cos(5(t - 0.1234)) sits between grid points
        let q = TrigPoly::cos(5, 1.0).shift(-0.1234).add(&TrigPoly::constant(0.5));
        assert!((q.sup_norm() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn parts_of_exponential() {
        let r = TrigPoly::monomial(1, c(1.0, 0.0));
        assert!(r.even_part().max_coeff_diff(&TrigPoly::cos(1, 1.0)) < 1e-16);
        let isin = TrigPoly::sin(1, 1.0).scale(1.0);
        let i_sin = TrigPoly::from_fn(1, |k| isin.coeff(k) * c(0.0, 1.0));
        assert!(r.odd_part().max_coeff_diff(&i_sin) < 1e-16);
        assert!(TrigPoly::sin(1, 1.0).even_part().is_zero());
        let mixed = TrigPoly::cos(1, 1.0).add(&TrigPoly::sin(2, 1.0));
        assert!(mixed.even_part().max_coeff_diff(&TrigPoly::cos(1, 1.0)) < 1e-16);
    }

    #[test]
    fn abs_squared_examples() {
        let one = TrigPoly::monomial(1, c(1.0, 0.0)).abs_squared();
        assert!(one.max_coeff_diff(&TrigPoly::constant(1.0)) < 1e-15);
        let q = TrigPoly::constant(1.0).add(&TrigPoly::monomial(1, c(1.0, 0.0)));
        let expect = TrigPoly::constant(2.0).add(&TrigPoly::cos(1, 2.0));
        assert!(q.abs_squared().max_coeff_diff(&expect) < 1e-15);
        let cos2 = TrigPoly::cos(1, 1.0).abs_squared();
        let expect = TrigPoly::constant(0.5).add(&TrigPoly::cos(2, 0.5));
        assert!(cos2.max_coeff_diff(&expect) < 1e-15);
    }

    #[test]
    fn shift_examples() {
        let r = TrigPoly::cos(1, 1.0).shift(PI);
        assert!(r.max_coeff_diff(&TrigPoly::cos(1, -1.0)) < 1e-15);
        let r = TrigPoly::monomial(1, c(1.0, 0.0)).shift(FRAC_PI_2);
        assert!(r.max_coeff_diff(&TrigPoly::monomial(1, c(0.0, 1.0))) < 1e-15);
        let q = TrigPoly::new(vec![c(0.3, -0.1), c(1.0, 0.2), c(-0.5, 0.7)]).unwrap();
        assert_eq!(q.shift(0.0), q);
    }

    #[test]
    fn cos_poly_bridge_examples() {
        let x = AlgPoly::from_real(&[0.0, 1.0]);
        assert!(TrigPoly::from_cos_poly(&x).max_coeff_diff(&TrigPoly::cos(1, 1.0)) < 1e-15);
        let t2 = AlgPoly::from_real(&[-1.0, 0.0, 2.0]);
        assert!(TrigPoly::from_cos_poly(&t2).max_coeff_diff(&TrigPoly::cos(2, 1.0)) < 1e-15);
        // 1 + 2cos t  ↔  1 + 2x
        let q = TrigPoly::constant(1.0).add(&TrigPoly::cos(1, 2.0));
        let p = q.to_cos_poly().unwrap();
        assert!(p.max_abs_coeff_diff(&AlgPoly::from_real(&[1.0, 2.0])) < 1e-15);
    }

    #[test]
    fn to_cos_poly_rejects_non_even() {
        let q = TrigPoly::sin(1, 1.0);
        assert!(matches!(q.to_cos_poly(), Err(RemezError::NotEven { .. })));
    }

    #[test]
    fn parity_classification() {
        assert_eq!(TrigPoly::cos(2, 1.0).parity_of(1e-12), Parity::Even);
        assert_eq!(TrigPoly::sin(1, 1.0).parity_of(1e-12), Parity::Odd);
        let mixed = TrigPoly::cos(1, 1.0).add(&TrigPoly::sin(1, 1.0));
        assert_eq!(mixed.parity_of(1e-12), Parity::Neither);
        assert_eq!(TrigPoly::zero(3).parity_of(1e-12), Parity::Even);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let q = TrigPoly::new(vec![c(0.25, -1.5), c(1.0, 0.0), c(0.25, 1.5)]).unwrap();
        let text = q.to_json();
        assert_eq!(TrigPoly::from_json(&text).unwrap(), q);

        let dup = r#"{"degree":1,"coeffs":[{"k":-1,"re":0,"im":0},{"k":-1,"re":0,"im":0},{"k":1,"re":0,"im":0}]}"#;
        assert!(TrigPoly::from_json(dup).is_err());
        let missing = r#"{"degree":1,"coeffs":[{"k":-1,"re":0,"im":0},{"k":1,"re":0,"im":0}]}"#;
        assert!(TrigPoly::from_json(missing).is_err());
        let unsorted = r#"{"degree":1,"coeffs":[{"k":0,"re":0,"im":0},{"k":-1,"re":0,"im":0},{"k":1,"re":0,"im":0}]}"#;
        assert!(TrigPoly::from_json(unsorted).is_err());
        assert!(TrigPoly::from_json("{not json").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn parity_decomposition_is_exact(r in arb_poly(10)) {
            let sum = r.even_part().add(&r.odd_part());
            // (a+b)/2 + (a-b)/2 may differ from a by one rounding of the larger term
            for k in -(r.degree() as i64)..=(r.degree() as i64) {
                let size = r.coeff(k).norm().max(r.coeff(-k).norm());
                prop_assert!((sum.coeff(k) - r.coeff(k)).norm() <= 2.0 * f64::EPSILON * size);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn periodic(r in arb_poly(10), t in -10.0..10.0f64) {
            let a = r.eval(t);
            let b = r.eval(t + TAU);
            prop_assert!((a - b).norm() <= 1e-12 * r.l1_norm().max(1e-300));
        }

        #[test]
        fn abs_squared_matches_pointwise(r in arb_poly(10)) {
            let sq = r.abs_squared();
            prop_assert_eq!(sq.degree(), 2 * r.degree());
            prop_assert!(sq.is_real_valued(1e-15));
            let scale = r.l1_norm().powi(2).max(1e-300);
            for i in 0..128 {
                let t = i as f64 * TAU / 128.0;
                let direct = r.eval(t).norm_sqr();
                let via = sq.eval(t);
                prop_assert!((via.re - direct).abs() <= 1e-11 * scale);
                prop_assert!(via.im.abs() <= 1e-11 * scale);
            }
        }

        #[test]
        fn shift_round_trip(r in arb_poly(10), a in -7.0..7.0f64) {
            let back = r.shift(a).shift(-a);
            prop_assert!(back.max_coeff_diff(&r) <= 1e-12);
        }

        #[test]
        fn shift_preserves_sup(r in arb_poly(8), a in -7.0..7.0f64) {
            let s0 = r.sup_norm();
            let s1 = r.shift(a).sup_norm();
            prop_assert!((s0 - s1).abs() <= 1e-9 * s0.max(1e-300));
        }

        #[test]
        fn cos_poly_round_trip(r in arb_poly(12)) {
            let q = r.even_part();
            let p = q.to_cos_poly().unwrap();
            let back = TrigPoly::from_cos_poly(&p);
            prop_assert!(back.max_coeff_diff(&q) <= 1e-10);
            let again = back.to_cos_poly().unwrap();
            prop_assert!(again.max_abs_coeff_diff(&p) <= 1e-10 * p.coeffs().iter().map(|a| a.norm()).fold(1.0, f64::max));
            for i in 0..16 {
                let t = i as f64 * 0.4;
                prop_assert!((p.eval(t.cos()) - q.eval(t)).norm() <= 1e-9 * q.l1_norm().max(1.0));
            }
        }

        #[test]
        fn sup_norm_agrees_with_denser_grid(r in arb_poly(8)) {
            let s1 = r.sup_norm();
            let s10 = r.sup_norm_with_density(10);
            prop_assert!((s1 - s10).abs() <= 1e-9 * s10.max(1e-300));
        }
    }
}
