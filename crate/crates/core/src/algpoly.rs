//! Complex algebraic polynomials in the power basis.

use num_complex::Complex64;

/// `P(x) = Σ a_j x^j`, `j = 0..=degree`. The degree is an upper bound: the
/// leading coefficient may vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgPoly {
    coeffs: Vec<Complex64>,
}

impl AlgPoly {
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "an AlgPoly needs at least one coefficient");
        AlgPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); degree + 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Value and first derivative at a real point.
    pub fn eval_with_derivative(&self, x: f64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut dp) = (zero, zero);
        for &a in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    }

    /// `x ↦ P(-x)`.
    pub fn reflect(&self) -> AlgPoly {
        AlgPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &a)| if j % 2 == 1 { -a } else { a })
                .collect(),
        )
    }

    /// Real coefficients of `|P(x)|^2` for real `x`, i.e. `P · conj(P)`.
    pub fn abs_squared(&self) -> Vec<f64> {
        let n = self.degree();
        let mut out = vec![0.0; 2 * n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in self.coeffs.iter().enumerate() {
                out[i + j] += (a * b.conj()).re;
            }
        }
        out
    }

    pub fn max_abs_coeff_diff(&self, other: &AlgPoly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|j| (self.coeff(j) - other.coeff(j)).norm())
            .fold(0.0, f64::max)
    }
}
