use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Polynomial with complex coefficients stored by ascending power.
///
/// Trailing coefficients that are exactly zero are trimmed, so the stored
/// leading coefficient is nonzero unless the polynomial is identically zero,
/// in which case `coeffs() == [0]`.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    /// `λ^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    /// `Π (λ - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::monomial(0), |acc, &r| {
            acc.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]))
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `λ^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Multiplies by `λ^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); k];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Largest coefficientwise distance, padding the shorter side with zeros.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Interpolating polynomial through `(nodes[k], values[k])`.
    ///
    /// Newton divided differences, then expansion into the monomial basis.
    /// Nodes must be pairwise distinct.
    pub fn interpolate(nodes: &[Complex64], values: &[Complex64]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::BadLength {
                expected: nodes.len(),
                got: values.len(),
            });
        }
        let n = nodes.len();
        if n == 0 {
            return Ok(Self::zero());
        }
        let mut dd = values.to_vec();
        for level in 1..n {
            for k in (level..n).rev() {
                let denom = nodes[k] - nodes[k - level];
                if denom == Complex64::new(0.0, 0.0) {
                    return Err(Error::BadShape(
                        "interpolation nodes must be distinct".into(),
                    ));
                }
                dd[k] = (dd[k] - dd[k - 1]) / denom;
            }
        }
        // Horner on the Newton form: p = dd0 + (x-x0)(dd1 + (x-x1)(dd2 + ...)).
        let mut acc = vec![dd[n - 1]];
        for k in (0..n - 1).rev() {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, &a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * nodes[k];
            }
            next[0] += dd[k];
            acc = next;
        }
        Ok(Self::new(acc))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:e}{:+e}i", c.re, c.im)?;
        }
        write!(f, "]")
    }
}
