//! Independent oracles for the integration tests.

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh quadrature of `f` over `[c, d]`. `f` receives the node together
/// with its distances to `c` and `d`, computed without cancellation, so
/// integrable endpoint singularities keep full accuracy.
pub fn tanh_sinh(c: f64, d: f64, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let half = 0.5 * (d - c);
    let h = 1.0 / 64.0;
    let mut total = 0.0;
    for j in -(6 * 64)..=(6 * 64) {
        let u = j as f64 * h;
        let v = FRAC_PI_2 * u.sinh();
        // 1 ∓ tanh(v) = 2 / (1 + e^{±2v})
        let from_left = half * 2.0 / (1.0 + (-2.0 * v).exp());
        let from_right = half * 2.0 / (1.0 + (2.0 * v).exp());
        if from_left <= 0.0 || from_right <= 0.0 {
            continue;
        }
        let weight = half * FRAC_PI_2 * u.cosh() / v.cosh().powi(2);
        if weight == 0.0 {
            continue;
        }
        let x = if from_left < from_right { c + from_left } else { d - from_right };
        total += weight * f(x, from_left, from_right);
    }
    total * h
}

/// `∫_S h/√(h² − (x−m)²) dx` over a union of pieces inside `[a, b]`, by
/// quadrature on each piece.
pub fn cheb_measure_by_quadrature(a: f64, b: f64, pieces: &[(f64, f64)]) -> f64 {
    let half = 0.5 * (b - a);
    pieces
        .iter()
        .map(|&(c, d)| {
            tanh_sinh(c, d, |x, to_c, to_d| {
                // (x − a)(b − x) with the exact distance when the piece touches an end
                let left = if c == a { to_c } else { x - a };
                let right = if d == b { to_d } else { b - x };
                half / (left * right).sqrt()
            })
        })
        .sum()
}
