//! Root finding for `G(t) = |Q(t)|^2 − L^2` on the circle and for
//! `H(x) = |P(x)|^2 − L^2` on a real interval.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::algpoly::AlgPoly;
use crate::error::{RemezError, Result};
use crate::trigpoly::TrigPoly;

/// Eigenvalues within this distance of the unit circle (or, on the line,
/// this fraction of the interval width off the real axis) are kept as
/// candidates. Clusters of near-double roots scatter far from the circle in
/// floating point, and a spurious candidate only splits a segment that the
/// sign classification later rejoins, so the window is generous.
const CIRCLE_WINDOW: f64 = 0.05;
const LINE_WINDOW: f64 = 0.1;
/// Relative coefficient mismatch below which `Q` is treated as real-valued.
const REAL_TOLERANCE: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 60;

/// Roots of `Σ p_j z^j` as eigenvalues of the Frobenius companion matrix.
pub(crate) fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let cutoff = 1e-15 * scale;
    let lo = coeffs.iter().position(|c| c.norm() > cutoff).unwrap_or(0);
    let hi = coeffs.iter().rposition(|c| c.norm() > cutoff).unwrap_or(0);
    let p = &coeffs[lo..=hi];
    let d = p.len() - 1;
    // vanishing low-order coefficients are roots at the origin
    let zeros = vec![Complex64::new(0.0, 0.0); lo];
    if d == 0 {
        return Ok(zeros);
    }
    let lead = p[d];
    let mut m = Square::zeros(d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -p[i] / lead;
    }
    balance(&mut m);
    let mut roots = hessenberg_eigenvalues(m)
        .ok_or_else(|| RemezError::NoConvergence("companion QR iteration".into()))?;
    roots.extend(zeros);
    Ok(roots)
}

/// Dense square complex matrix, row-major.
struct Square {
    d: usize,
    a: Vec<Complex64>,
}

impl Square {
    fn zeros(d: usize) -> Self {
        Square {
            d,
            a: vec![Complex64::new(0.0, 0.0); d * d],
        }
    }
}

impl std::ops::Index<(usize, usize)> for Square {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.a[i * self.d + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Square {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.a[i * self.d + j]
    }
}

/// Parlett–Reinsch diagonal balancing with powers of two.
fn balance(m: &mut Square) {
    let d = m.d;
    let radix = 2.0_f64;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..d {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..d {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            // c now holds c·f², so (c + r)/f is the balanced row+column norm
            if (c + r) / f < 0.95 * total {
                converged = false;
                for j in 0..d {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
/// Wilkinson shifts and an exceptional shift every tenth iteration.
fn hessenberg_eigenvalues(mut h: Square) -> Option<Vec<Complex64>> {
    let d = h.d;
    let eps = f64::EPSILON;
    let norm = h.a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tiny = f64::MIN_POSITIVE / eps;
    let mut eig = vec![Complex64::new(0.0, 0.0); d];
    let mut hi = d - 1;
    let mut iter = 0;
    let mut rot = Vec::with_capacity(d);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            return Some(eig);
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            let diag = if diag == 0.0 { norm } else { diag };
            if sub <= eps * diag || sub <= tiny {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * d.max(10) {
            return None;
        }
        let shift = if iter % 10 == 0 {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].re.abs() + 0.5 * norm * eps.sqrt(), 0.0)
        } else {
            let (a, b, c, e) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            let half = (a - e) * 0.5;
            let root = (half * half + b * c).sqrt();
            let (r1, r2) = (e + half + root, e + half - root);
            if (r1 - e).norm() <= (r2 - e).norm() { r1 } else { r2 }
        };
        for k in l..=hi {
            h[(k, k)] -= shift;
        }
        rot.clear();
        for k in l..hi {
            let (x, y) = (h[(k, k)], h[(k + 1, k)]);
            let r = x.norm().hypot(y.norm());
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rot.push((c, s));
        }
        for (offset, &(c, s)) in rot.iter().enumerate() {
            let k = l + offset;
            for i in l..=(k + 2).min(hi) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for k in l..=hi {
            h[(k, k)] += shift;
        }
    }
}

/// Newton's method on `t ↦ |Q(t)|^2 − L^2`, finished by bisection on the
/// smallest sign-changing bracket around the Newton limit, so that rounding
/// noise in the evaluation cannot stall the last digits. Returns `None` if
/// the iteration wanders off.
fn polish_circle(q: &TrigPoly, level2: f64, t0: f64, scale: f64) -> Option<f64> {
    let g = |t: f64| q.eval(t).norm_sqr() - level2;
    let mut t = t0;
    let mut last = 0.1;
    for _ in 0..NEWTON_MAX_ITER {
        let (v, dv) = q.abs2_with_derivative(t);
        let gv = v - level2;
        if gv == 0.0 {
            return Some(t);
        }
        if dv == 0.0 || !dv.is_finite() {
            break;
        }
        let step = gv / dv;
        if !step.is_finite() || step.abs() > 0.1 {
            return None;
        }
        t -= step;
        last = step.abs();
        if last <= 4.0 * f64::EPSILON * (1.0 + t.abs()) {
            break;
        }
    }
    if (t - t0).abs() >= 0.1 {
        return None;
    }
    let mut w = (2.0 * last).max(1e-14);
    while w <= 1e-6 {
        let (ga, gb) = (g(t - w), g(t + w));
        if (ga <= 0.0) != (gb <= 0.0) {
            return Some(bisect(&g, t - w, t + w, ga));
        }
        w *= 8.0;
    }
    // no sign change nearby: a tangential touch, or a slowly converging
    // double root that still lands on a near-zero of G
    if g(t).abs() <= 1e-9 * scale {
        Some(t)
    } else {
        None
    }
}

/// Candidate boundary points of `{|Q| ≤ L}` from companion eigenvalues,
/// polished by Newton's method on the accurate evaluation of `|Q(t)|^2`.
///
/// For real-valued `Q` the level set is `{Q = L} ∪ {Q = −L}` and the two
/// factors of `G = (Q − L)(Q + L)` are solved separately; their coefficients
/// span the square root of the range of `G`'s, which keeps large extremal
/// polynomials resolvable at level `L`. Otherwise the roots of `z^{2n} G(z)`
/// are used.
pub(crate) fn eigen_candidates(q: &TrigPoly, level: f64) -> Result<Vec<f64>> {
    let roots = if q.is_real_valued(REAL_TOLERANCE) {
        let mut roots = companion_roots(q.sub_constant(level).coeffs())?;
        roots.extend(companion_roots(q.sub_constant(-level).coeffs())?);
        roots
    } else {
        companion_roots(q.abs_squared().sub_constant(level * level).coeffs())?
    };
    let level2 = level * level;
    let scale = q.l1_norm().powi(2) + level2;
    let mut out = Vec::new();
    for z in roots {
        let radius = z.norm();
        if !radius.is_finite() {
            return Err(RemezError::NoConvergence("non-finite companion eigenvalue".into()));
        }
        if (radius - 1.0).abs() > CIRCLE_WINDOW {
            continue;
        }
        let t0 = z.arg().rem_euclid(TAU);
        out.push(polish_circle(q, level2, t0, scale).unwrap_or(t0).rem_euclid(TAU));
    }
    Ok(out)
}

/// Candidate boundary points from a sign scan of `|Q(t)|^2 − L^2` on a
/// uniform grid, with bisection on every sign change. Grid extrema that come
/// close to the level are refined by golden-section search so that pairs of
/// roots closer than the grid spacing are not lost.
pub(crate) fn sample_candidates(q: &TrigPoly, level: f64, density: usize) -> Vec<f64> {
    let n = q.degree();
    let points = (64 * 2 * n).max(1024) * density.max(1);
    let h = TAU / points as f64;
    let level2 = level * level;
    let g = |t: f64| q.eval(t).norm_sqr() - level2;
    let values: Vec<f64> = (0..points).map(|i| g(i as f64 * h)).collect();
    let inside = |v: f64| v <= 0.0;

    // Bernstein bound on how far G can move between a grid point and a
    // nearby extremum: |G''| ≤ (2n)^2 · sup|Q|^2.
    let sup2 = q.l1_norm().powi(2);
    let reach = 0.5 * (2.0 * n as f64).powi(2) * sup2 * h * h;

    let mut out = Vec::new();
    for i in 0..points {
        let j = (i + 1) % points;
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        if inside(values[i]) != inside(values[j]) {
            out.push(bisect(&g, a, b, values[i]));
        }
    }
    for i in 0..points {
        let prev = values[(i + points - 1) % points];
        let next = values[(i + 1) % points];
        let v = values[i];
        let same_sign = inside(prev) == inside(v) && inside(v) == inside(next);
        if !same_sign || v.abs() > reach {
            continue;
        }
        let a = (i as f64 - 1.0) * h;
        let b = (i as f64 + 1.0) * h;
        let extremum = if inside(v) && v >= prev && v >= next {
            crate::trigpoly::golden_max(&g, a, b)
        } else if !inside(v) && v <= prev && v <= next {
            let (t, val) = crate::trigpoly::golden_max(|t| -g(t), a, b);
            (t, -val)
        } else {
            continue;
        };
        let (tm, gm) = extremum;
        if inside(gm) != inside(v) {
            out.push(bisect(&g, a, tm, prev));
            out.push(bisect(&g, tm, b, gm));
        }
    }
    out.into_iter().map(|t| t.rem_euclid(TAU)).collect()
}

/// Bisection on `[a, b]` where `f(a)` has the classification of `fa`.
fn bisect(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let left_inside = fa <= 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || b - a <= 1e-15 {
            break;
        }
        if (f(m) <= 0.0) == left_inside {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Real roots in `[a, b]` of `H(x) = |P(x)|^2 − L^2`, from the companion
/// eigenvalues of its power-basis coefficients, polished by Newton's method.
pub(crate) fn line_candidates(p: &AlgPoly, level: f64, a: f64, b: f64) -> Result<Vec<f64>> {
    let mut h: Vec<Complex64> = p
        .abs_squared()
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    h[0] -= level * level;
    let roots = companion_roots(&h)?;
    let level2 = level * level;
    let width = b - a;
    let mut out = Vec::new();
    for z in roots {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(RemezError::NoConvergence("non-finite companion eigenvalue".into()));
        }
        let window = LINE_WINDOW * width;
        if z.im.abs() > window || z.re < a - window || z.re > b + window {
            continue;
        }
        let mut x = z.re.clamp(a, b);
        let mut ok = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (v, dv) = p.eval_with_derivative(x);
            let hval = v.norm_sqr() - level2;
            let dh = 2.0 * (v.conj() * dv).re;
            if hval == 0.0 {
                ok = true;
                break;
            }
            if dh == 0.0 || !dh.is_finite() {
                break;
            }
            let step = hval / dh;
            if !step.is_finite() || step.abs() > 0.1 * width {
                break;
            }
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
                ok = true;
                break;
            }
        }
        if !ok {
            let v = p.eval(x).norm_sqr() - level2;
            ok = v.abs() <= 1e-9 * (p.coeffs().iter().map(|c| c.norm()).sum::<f64>().powi(2) + level2);
        }
        if ok && x >= a && x <= b {
            out.push(x);
        } else {
            out.push(z.re.clamp(a, b));
        }
    }
    Ok(out)
}
