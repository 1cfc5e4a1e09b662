//! Chebyshev polynomials of the first kind and the closed-form Remez bounds.
//!
//! `T_n(x)` is evaluated with three branches: `cos(n·arccos x)` on `[-1, 1]`,
//! `½(uⁿ + u⁻ⁿ)` with `u = x + √(x²−1)` for `x > 1`, and reflection for
//! `x < −1`. Using `u⁻¹` in place of `x − √(x²−1)` avoids the cancellation
//! that otherwise ruins the small term. Results that leave the f64 range are
//! reported as [`RemezError::Overflow`]; every bound has a `log_` twin.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::algpoly::AlgPoly;
use crate::error::{RemezError, Result};

/// `T_n(x)`.
pub fn cheb_t(n: usize, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(RemezError::domain("x is NaN"));
    }
    let value = if x == 1.0 {
        1.0
    } else if x == -1.0 {
        if n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else if x.abs() < 1.0 {
        (n as f64 * x.acos()).cos()
    } else if x > 1.0 {
        let u = growth_base(x);
        0.5 * (u.powf(n as f64) + u.powf(-(n as f64)))
    } else {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return cheb_t(n, -x).map(|v| sign * v);
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RemezError::Overflow)
    }
}

/// `log T_n(x)` for `x > 1`.
pub fn log_cheb_t(n: usize, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return Err(RemezError::domain(format!("log_cheb_t needs x > 1, got {x}")));
    }
    Ok(log_cheb_t_unchecked(n, x))
}

/// `log T_n(x)` for `x ≥ 1`; `x = 1` gives 0.
fn log_cheb_t_unchecked(n: usize, x: f64) -> f64 {
    if x == 1.0 || n == 0 {
        return 0.0;
    }
    let u = growth_base(x);
    let ln_u = u.ln();
    // ratio (x − √(x²−1)) / (x + √(x²−1)) = u⁻², raised to the n-th power
    let tail = (-2.0 * n as f64 * ln_u).exp();
    n as f64 * ln_u + tail.ln_1p() - LN_2
}

/// `x + √(x²−1)` for `x ≥ 1`, with `x² − 1` formed as `(x−1)(x+1)`.
fn growth_base(x: f64) -> f64 {
    x + ((x - 1.0) * (x + 1.0)).sqrt()
}

/// Power-basis coefficients of `T_0, …, T_n` from the three-term recurrence.
/// Row `k` has `k + 1` entries.
pub fn chebyshev_table(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    rows.push(vec![1.0]);
    if n >= 1 {
        rows.push(vec![0.0, 1.0]);
    }
    for k in 2..=n {
        let mut next = vec![0.0; k + 1];
        for (j, &a) in rows[k - 1].iter().enumerate() {
            next[j + 1] += 2.0 * a;
        }
        for (j, &a) in rows[k - 2].iter().enumerate() {
            next[j] -= a;
        }
        rows.push(next);
    }
    rows
}

/// `T_n` in the power basis.
pub fn cheb_coeffs(n: usize) -> AlgPoly {
    let mut table = chebyshev_table(n);
    AlgPoly::from_real(&table.swap_remove(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// Even trigonometric polynomials, `s ∈ (0, 2π)`: `T_{2n}(sec(s/4))`.
    #[serde(rename = "even")]
    EvenPeriod,
    /// Odd trigonometric polynomials, `s ∈ (0, 2π)`: even bound `+ 1/√2`.
    #[serde(rename = "odd")]
    OddPeriod,
    /// All trigonometric polynomials, `s ∈ (0, π)`: `T_{2n}(sec(s/2))`.
    #[serde(rename = "all")]
    AllPeriod,
    /// Algebraic polynomials on `[-1, 1]`, `s ∈ (0, 2)`: `T_n((2+s)/(2−s))`.
    #[serde(rename = "classical")]
    ClassicalAlgebraic,
    /// `exp(min{5n√s, 2n²s})`, `s ∈ (0, 1]`.
    #[serde(rename = "classical-exp")]
    ClassicalExp,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::EvenPeriod,
        BoundKind::OddPeriod,
        BoundKind::AllPeriod,
        BoundKind::ClassicalAlgebraic,
        BoundKind::ClassicalExp,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::EvenPeriod => "even",
            BoundKind::OddPeriod => "odd",
            BoundKind::AllPeriod => "all",
            BoundKind::ClassicalAlgebraic => "classical",
            BoundKind::ClassicalExp => "classical-exp",
        }
    }

    pub fn from_name(name: &str) -> Option<BoundKind> {
        BoundKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the bound concerns trigonometric polynomials on the period.
    pub fn is_periodic(self) -> bool {
        matches!(self, BoundKind::EvenPeriod | BoundKind::OddPeriod | BoundKind::AllPeriod)
    }

    pub fn check_domain(self, n: usize, s: f64) -> Result<()> {
        let (lo, hi, closed_hi) = match self {
            BoundKind::EvenPeriod | BoundKind::OddPeriod => (0.0, TAU, false),
            BoundKind::AllPeriod => (0.0, PI, false),
            BoundKind::ClassicalAlgebraic => (0.0, 2.0, false),
            BoundKind::ClassicalExp => (0.0, 1.0, true),
        };
        let inside = s > lo && (s < hi || (closed_hi && s == hi));
        if !inside {
            let close = if closed_hi { ']' } else { ')' };
            return Err(RemezError::domain(format!(
                "{} bound needs s in ({lo}, {hi}{close}, got {s}",
                self.name()
            )));
        }
        if self == BoundKind::OddPeriod && n == 0 {
            return Err(RemezError::domain("odd bound needs n >= 1"));
        }
        Ok(())
    }

    pub fn bound(self, n: usize, s: f64) -> Result<f64> {
        match self {
            BoundKind::EvenPeriod => bound_even(n, s),
            BoundKind::OddPeriod => bound_odd(n, s),
            BoundKind::AllPeriod => bound_all(n, s),
            BoundKind::ClassicalAlgebraic => bound_classical(n, s),
            BoundKind::ClassicalExp => bound_classical_exp(n, s),
        }
    }

    pub fn log_bound(self, n: usize, s: f64) -> Result<f64> {
        self.check_domain(n, s)?;
        Ok(match self {
            BoundKind::EvenPeriod => log_cheb_t_unchecked(2 * n, 1.0 / (s / 4.0).cos()),
            BoundKind::OddPeriod => {
                let l = log_cheb_t_unchecked(2 * n, 1.0 / (s / 4.0).cos());
                l + ((-l).exp() * FRAC_1_SQRT_2).ln_1p()
            }
            BoundKind::AllPeriod => BoundKind::EvenPeriod.log_bound(n, 2.0 * s)?,
            BoundKind::ClassicalAlgebraic => log_cheb_t_unchecked(n, (2.0 + s) / (2.0 - s)),
            BoundKind::ClassicalExp => classical_exp_exponent(n, s),
        })
    }
}

/// `T_{2n}(sec(s/4))`, the sharp bound for even polynomials.
pub fn bound_even(n: usize, s: f64) -> Result<f64> {
    BoundKind::EvenPeriod.check_domain(n, s)?;
    cheb_t(2 * n, 1.0 / (s / 4.0).cos())
}

/// `½((sec(s/4) + tan(s/4))^{2n} + (sec(s/4) − tan(s/4))^{2n})`.
pub fn bound_even_identity(n: usize, s: f64) -> Result<f64> {
    BoundKind::EvenPeriod.check_domain(n, s)?;
    let (sin, cos) = (s / 4.0).sin_cos();
    let plus = (1.0 + sin) / cos;
    // sec − tan = cos / (1 + sin), free of cancellation near s = 2π
    let minus = cos / (1.0 + sin);
    let e = 2.0 * n as f64;
    let value = 0.5 * (plus.powf(e) + minus.powf(e));
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RemezError::Overflow)
    }
}

pub fn bound_odd(n: usize, s: f64) -> Result<f64> {
    BoundKind::OddPeriod.check_domain(n, s)?;
    Ok(bound_even(n, s)? + FRAC_1_SQRT_2)
}

/// `(¼((sec+tan)^{4n} + (sec−tan)^{4n}) + ½)^{1/2}` at `s/4`: the square-root
/// step that precedes the odd bound.
pub fn odd_sqrt_step(n: usize, s: f64) -> Result<f64> {
    BoundKind::OddPeriod.check_domain(n, s)?;
    let (sin, cos) = (s / 4.0).sin_cos();
    let plus = (1.0 + sin) / cos;
    let minus = cos / (1.0 + sin);
    let e = 4.0 * n as f64;
    let value = (0.25 * (plus.powf(e) + minus.powf(e)) + 0.5).sqrt();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RemezError::Overflow)
    }
}

/// `T_{2n}(sec(s/2))`; shares the even-bound code path at `2s`.
pub fn bound_all(n: usize, s: f64) -> Result<f64> {
    BoundKind::AllPeriod.check_domain(n, s)?;
    bound_even(n, 2.0 * s)
}

/// `T_n((2+s)/(2−s))`.
pub fn bound_classical(n: usize, s: f64) -> Result<f64> {
    BoundKind::ClassicalAlgebraic.check_domain(n, s)?;
    cheb_t(n, (2.0 + s) / (2.0 - s))
}

/// `exp(min{5n√s, 2n²s})`.
pub fn bound_classical_exp(n: usize, s: f64) -> Result<f64> {
    BoundKind::ClassicalExp.check_domain(n, s)?;
    let value = classical_exp_exponent(n, s).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RemezError::Overflow)
    }
}

fn classical_exp_exponent(n: usize, s: f64) -> f64 {
    let n = n as f64;
    (5.0 * n * s.sqrt()).min(2.0 * n * n * s)
}
