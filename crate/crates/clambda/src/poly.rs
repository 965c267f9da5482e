//! Dense complex polynomials in one variable.
//!
//! `coeffs[i]` is the coefficient of `z^i`. Trailing coefficients that are
//! exactly zero are trimmed on construction, so the representation is
//! canonical: the zero polynomial stores nothing and reports degree `None`.
//! Trimming is exact on purpose; tolerance-based cleanup would break the
//! structural-zero guarantees the symmetry checks rely on.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolyRepr", from = "PolyRepr")]
pub struct DensePoly {
    coeffs: Vec<Complex64>,
}

/// Wire format: `{"coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<[f64; 2]>,
}

impl From<DensePoly> for PolyRepr {
    fn from(p: DensePoly) -> Self {
        PolyRepr {
            coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl From<PolyRepr> for DensePoly {
    fn from(r: PolyRepr) -> Self {
        DensePoly::from_coeffs(r.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)))
    }
}

impl DensePoly {
    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `z^n` with coefficient 1.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        DensePoly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_coeffs([c])
    }

    pub fn from_coeffs<I: IntoIterator<Item = Complex64>>(coeffs: I) -> Self {
        let mut coeffs: Vec<Complex64> = coeffs.into_iter().collect();
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest stored index, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^i`, zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs
            .get(i)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c))
    }

    /// Multiplication by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        DensePoly { coeffs }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Argument substitution `p(c z)`: coefficient `i` picks up `c^i`.
    pub fn scale_argument(&self, c: Complex64) -> Self {
        let mut f = Complex64::new(1.0, 0.0);
        Self::from_coeffs(self.coeffs.iter().map(|a| {
            let out = a * f;
            f *= c;
            out
        }))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// In-place `self += c * other`; keeps structural zeros where both sides
    /// have them.
    pub fn add_scaled_assign(&mut self, c: Complex64, other: &Self) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs
                .resize(other.coeffs.len(), Complex64::new(0.0, 0.0));
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            if b.re == 0.0 && b.im == 0.0 {
                continue;
            }
            self.coeffs[i] += c * b;
        }
        while self
            .coeffs
            .last()
            .is_some_and(|v| v.re == 0.0 && v.im == 0.0)
        {
            self.coeffs.pop();
        }
    }
}

impl std::ops::Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        DensePoly::add(self, rhs)
    }
}

impl std::ops::Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        DensePoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        DensePoly::mul(self, rhs)
    }
}

/// Largest coefficient gap between `a` and `b`, relative to
/// `max(1, largest coefficient involved)`.
pub fn rel_distance(a: &DensePoly, b: &DensePoly) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    let diff = (0..n)
        .map(|i| (a.coeff(i) - b.coeff(i)).norm())
        .fold(0.0, f64::max);
    diff / a.max_abs_coeff().max(b.max_abs_coeff()).max(1.0)
}

/// Relative gap between two scalars against `max(1, magnitude)`.
pub fn rel_gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Requested degree must be covered by a cached family of length `len`.
pub(crate) fn check_degree(n: usize, len: usize) -> Result<()> {
    if n < len {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange { got: n, max: len.saturating_sub(1) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(DensePoly::zero().degree(), None);
        assert_eq!(DensePoly::from_coeffs([c(0.0, 0.0); 4]).degree(), None);
        assert_eq!(DensePoly::constant(c(3.0, 0.0)).degree(), Some(0));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = DensePoly::from_coeffs([c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeffs().len(), 2);
        assert_eq!(p.coeff(5), c(0.0, 0.0));
    }

    #[test]
    fn horner_matches_direct_sum() {
        let p = DensePoly::from_coeffs([c(1.0, 0.0), c(-2.0, 1.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let z = c(0.5, -1.5);
        let direct = c(1.0, 0.0) + c(-2.0, 1.0) * z + c(3.0, 0.0) * z * z * z;
        assert!((p.eval(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn product_degrees_add() {
        let a = DensePoly::from_coeffs([c(1.0, 0.0), c(1.0, 0.0)]);
        let b = DensePoly::from_coeffs([c(-1.0, 0.0), c(1.0, 0.0)]);
        let ab = &a * &b;
        assert_eq!(ab.degree(), Some(2));
        assert_eq!(ab.coeff(0), c(-1.0, 0.0));
        assert_eq!(ab.coeff(1), c(0.0, 0.0));
        assert_eq!(ab.coeff(2), c(1.0, 0.0));
    }

    #[test]
    fn scale_argument_powers_the_factor() {
        let p = DensePoly::from_coeffs([c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let q = p.scale_argument(c(2.0, 0.0));
        assert_eq!(q.coeff(0), c(1.0, 0.0));
        assert_eq!(q.coeff(1), c(2.0, 0.0));
        assert_eq!(q.coeff(2), c(4.0, 0.0));
    }

    #[test]
    fn json_round_trip_preserves_coefficients() {
        let p = DensePoly::from_coeffs([c(1.5, -0.25), c(0.0, 0.0), c(0.0, 3.0)]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"coeffs":[[1.5,-0.25],[0.0,0.0],[0.0,3.0]]}"#);
        let back: DensePoly = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn shift_up_multiplies_by_monomial() {
        let p = DensePoly::from_coeffs([c(2.0, 0.0), c(3.0, 0.0)]);
        let q = p.shift_up(2);
        assert_eq!(q.degree(), Some(3));
        assert_eq!(q.coeff(2), c(2.0, 0.0));
        assert_eq!(q.coeff(3), c(3.0, 0.0));
        assert!(DensePoly::zero().shift_up(3).is_zero());
    }
}
