//! Band operators on the monomial basis.
//!
//! Every operator in play here maps a monomial to a multiple of a single
//! monomial: `T z^n = c(n) z^{n+k}` for a fixed shift `k` and a coefficient
//! map `c`. Closure under composition makes this a convenient engine for
//! the one-variable model: the reflection `S f(z) = f(eps z)`, the plain
//! derivative `D`, multiplication `Z` by `z`, and the Dunkl-type lowering
//! operator `Y z^n = [n] z^{n-1}` are all band operators, and the operator
//! identities below reduce to polynomial comparisons monomial by monomial.
//!
//! Coefficient maps are required to vanish whenever `n + k < 0`; the
//! built-in constructors guarantee it ([0] = 0 exactly kills the constant
//! under lowering), and `apply` skips those terms.

use std::sync::Arc;

use num_complex::Complex64;

use crate::params::AlgebraParams;
use crate::poly::{rel_distance, DensePoly};

type CoeffMap = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub struct BandOperator {
    shift: i64,
    coeff: CoeffMap,
    label: String,
}

impl std::fmt::Debug for BandOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BandOperator({}, shift {})", self.label, self.shift)
    }
}

impl BandOperator {
    pub fn new(
        shift: i64,
        label: impl Into<String>,
        coeff: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        BandOperator {
            shift,
            coeff: Arc::new(coeff),
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(0, "1", |_| Complex64::new(1.0, 0.0))
    }

    /// Multiplication by `z`.
    pub fn z_mul() -> Self {
        Self::new(1, "Z", |_| Complex64::new(1.0, 0.0))
    }

    /// Ordinary differentiation.
    pub fn derivative() -> Self {
        Self::new(-1, "D", |n| Complex64::new(n as f64, 0.0))
    }

    /// Reflection power `S^j`: `z^n -> eps^{jn} z^n`.
    pub fn reflection(p: &AlgebraParams, j: i64) -> Self {
        let p = p.clone();
        Self::new(0, format!("S^{j}"), move |n| p.epsilon_pow(j * n as i64))
    }

    /// Dunkl-type lowering operator `Y`: `z^n -> [n] z^{n-1}`.
    pub fn dunkl(p: &AlgebraParams) -> Self {
        let p = p.clone();
        Self::new(-1, "Y", move |n| p.deformed_number(n))
    }

    /// `Y^m` in closed form: `z^n -> [n][n-1]...[n-m+1] z^{n-m}`.
    pub fn dunkl_power(p: &AlgebraParams, m: u32) -> Self {
        let p = p.clone();
        Self::new(-(m as i64), format!("Y^{m}"), move |n| {
            let mut acc = Complex64::new(1.0, 0.0);
            for j in 0..m as u64 {
                if j > n {
                    return Complex64::new(0.0, 0.0);
                }
                acc *= p.deformed_number(n - j);
            }
            acc
        })
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn coeff_at(&self, n: u64) -> Complex64 {
        (self.coeff)(n)
    }

    /// Operator product `self . rhs` (rhs acts first).
    pub fn compose(&self, rhs: &Self) -> Self {
        let shift = self.shift + rhs.shift;
        let k1 = rhs.shift;
        let c1 = Arc::clone(&rhs.coeff);
        let c2 = Arc::clone(&self.coeff);
        Self::new(
            shift,
            format!("{} {}", self.label, rhs.label),
            move |n| {
                let first = c1(n);
                let mid = n as i64 + k1;
                if mid < 0 {
                    // c1 must vanish here by the band contract
                    return Complex64::new(0.0, 0.0);
                }
                c2(mid as u64) * first
            },
        )
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let c = Arc::clone(&self.coeff);
        Self::new(self.shift, format!("c {}", self.label), move |n| factor * c(n))
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..m {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn apply(&self, p: &DensePoly) -> DensePoly {
        let mut out: Vec<Complex64> = Vec::new();
        for (n, a) in p.coeffs().iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let m = n as i64 + self.shift;
            if m < 0 {
                continue;
            }
            let m = m as usize;
            if out.len() <= m {
                out.resize(m + 1, Complex64::new(0.0, 0.0));
            }
            out[m] += (self.coeff)(n as u64) * a;
        }
        DensePoly::from_coeffs(out)
    }
}

/// `exp(-Y^lambda / lambda)` applied to `f`. The sum terminates: each
/// application of `Y^lambda` removes `lambda` degrees.
pub fn exp_neg_dunkl_power(p: &AlgebraParams, f: &DensePoly) -> DensePoly {
    let lambda = p.lambda() as u32;
    let y_lam = BandOperator::dunkl_power(p, lambda);
    let mut term = f.clone();
    let mut acc = f.clone();
    let mut factor = Complex64::new(1.0, 0.0);
    let mut k = 0u32;
    loop {
        term = y_lam.apply(&term);
        if term.is_zero() {
            break;
        }
        k += 1;
        factor *= -1.0 / (p.lambda() as f64 * k as f64);
        acc.add_scaled_assign(factor, &term);
    }
    acc
}

/// Largest relative deviation, over monomials up to `deg`, of the
/// reflection conjugations `Y S = eps S Y` and `S Z = eps Z S`.
pub fn reflection_conjugation_residual(p: &AlgebraParams, deg: usize) -> f64 {
    let s = BandOperator::reflection(p, 1);
    let y = BandOperator::dunkl(p);
    let z = BandOperator::z_mul();
    let eps = p.epsilon_pow(1);
    let mut worst = 0.0f64;
    for m in 0..=deg {
        let mono = DensePoly::monomial(m);
        let lhs = y.apply(&s.apply(&mono));
        let rhs = s.apply(&y.apply(&mono)).scale(eps);
        worst = worst.max(rel_distance(&lhs, &rhs));
        let lhs = s.apply(&z.apply(&mono));
        let rhs = z.apply(&s.apply(&mono)).scale(eps);
        worst = worst.max(rel_distance(&lhs, &rhs));
    }
    worst
}

/// Reflection part of the commutator: `n + sum_i nu_i (eps^{in} - 1) S^i`
/// as a band operator.
fn commutator_tail(p: &AlgebraParams, n: u64) -> BandOperator {
    let p = p.clone();
    let order = n as i64;
    BandOperator::new(0, format!("({n} + reflections)"), move |m| {
        let mut acc = Complex64::new(n as f64, 0.0);
        for i in 1..p.lambda() as i64 {
            let weight = p.nu()[i as usize] * (p.epsilon_pow(i * order) - 1.0);
            acc += weight * p.epsilon_pow(i * m as i64);
        }
        acc
    })
}

/// Largest relative deviation, over monomials up to `deg`, of the power
/// commutator identities
/// `[Y^n, Z] = (n + sum_i nu_i (eps^{in} - 1) S^i) Y^{n-1}` and
/// `[Y, Z^n] = Z^{n-1} (n + sum_i nu_i (eps^{in} - 1) S^i)`.
pub fn commutator_residual(p: &AlgebraParams, n: u32, deg: usize) -> f64 {
    assert!(n >= 1);
    let y = BandOperator::dunkl(p);
    let z = BandOperator::z_mul();
    let yn = BandOperator::dunkl_power(p, n);
    let zn = z.pow(n);
    let tail = commutator_tail(p, n as u64);
    let y_nm1 = BandOperator::dunkl_power(p, n - 1);
    let z_nm1 = z.pow(n - 1);

    let mut worst = reflection_conjugation_residual(p, deg);
    for m in 0..=deg {
        let mono = DensePoly::monomial(m);

        let lhs = yn.apply(&z.apply(&mono)).sub(&z.apply(&yn.apply(&mono)));
        let rhs = tail.apply(&y_nm1.apply(&mono));
        worst = worst.max(rel_distance(&lhs, &rhs));

        let lhs = y.apply(&zn.apply(&mono)).sub(&zn.apply(&y.apply(&mono)));
        let rhs = z_nm1.apply(&tail.apply(&mono));
        worst = worst.max(rel_distance(&lhs, &rhs));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_cycle() -> AlgebraParams {
        AlgebraParams::new(2, &[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap()
    }

    fn three_cycle_zero() -> AlgebraParams {
        AlgebraParams::new(3, &[c(0.0, 0.0); 3]).unwrap()
    }

    #[test]
    fn dunkl_moves_one_degree_down() {
        let p = two_cycle();
        let y = BandOperator::dunkl(&p);
        // Y z^3 = [3] z^2 = 4 z^2
        let out = y.apply(&DensePoly::monomial(3));
        assert_eq!(out.degree(), Some(2));
        assert!((out.coeff(2) - c(4.0, 0.0)).norm() < 1e-14);
        // constants are annihilated exactly
        assert!(y.apply(&DensePoly::one()).is_zero());
    }

    #[test]
    fn dunkl_power_matches_iterated_dunkl() {
        let p = two_cycle();
        let y2 = BandOperator::dunkl_power(&p, 2);
        let out = y2.apply(&DensePoly::monomial(3));
        // [3][2] z = 8 z
        assert_eq!(out.degree(), Some(1));
        assert!((out.coeff(1) - c(8.0, 0.0)).norm() < 1e-14);

        let y = BandOperator::dunkl(&p);
        let iterated = y.compose(&y);
        for m in 0..10 {
            let mono = DensePoly::monomial(m);
            assert!(rel_distance(&y2.apply(&mono), &iterated.apply(&mono)) < 1e-15);
        }
    }

    #[test]
    fn composition_tracks_shift_and_order() {
        let p = two_cycle();
        let y = BandOperator::dunkl(&p);
        let z = BandOperator::z_mul();
        let yz = y.compose(&z); // Y Z: z^n -> [n+1] z^n
        assert_eq!(yz.shift(), 0);
        let out = yz.apply(&DensePoly::monomial(2));
        assert!((out.coeff(2) - c(4.0, 0.0)).norm() < 1e-14); // [3] = 4
        let zy = z.compose(&y); // Z Y: z^n -> [n] z^n
        let out = zy.apply(&DensePoly::monomial(2));
        assert!((out.coeff(2) - c(2.0, 0.0)).norm() < 1e-14); // [2] = 2
    }

    #[test]
    fn reflection_has_full_period() {
        // quarter-turn phases are exact, so the composed period closes
        // bit-for-bit; other orders close to an ulp
        let p4 = AlgebraParams::new(4, &[c(0.1, 0.0), c(0.0, 0.0), c(-0.1, 0.0), c(0.0, 0.0)])
            .unwrap();
        let s4 = BandOperator::reflection(&p4, 1).pow(4);
        let p = three_cycle_zero();
        let s3 = BandOperator::reflection(&p, 1).pow(3);
        for m in 0..12 {
            let mono = DensePoly::monomial(m);
            assert_eq!(s4.apply(&mono), mono);
            assert!(rel_distance(&s3.apply(&mono), &mono) < 1e-14);
        }
    }

    #[test]
    fn exp_transform_reference_values() {
        let p = two_cycle();
        // z^2 - (1/2)[2][1] = z^2 - 2
        let h2 = exp_neg_dunkl_power(&p, &DensePoly::monomial(2));
        assert!((h2.coeff(0) - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((h2.coeff(2) - c(1.0, 0.0)).norm() < 1e-14);

        let p3 = three_cycle_zero();
        // z^4 - (1/3)[4][3][2] z = z^4 - 8z
        let h4 = exp_neg_dunkl_power(&p3, &DensePoly::monomial(4));
        assert!((h4.coeff(1) - c(-8.0, 0.0)).norm() < 1e-14);
        assert!((h4.coeff(4) - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(h4.coeff(0), c(0.0, 0.0));
        assert_eq!(h4.coeff(2), c(0.0, 0.0));
        assert_eq!(h4.coeff(3), c(0.0, 0.0));
    }

    #[test]
    fn commutator_identities_hold_for_mixed_profile() {
        let p = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        for n in 1..=4 {
            assert!(commutator_residual(&p, n, 14) < 1e-12);
        }
    }

    #[test]
    fn commutator_identities_hold_for_four_cycle() {
        let nu = [
            c(0.2, 0.0),
            c(-0.025, -0.025),
            c(-0.15, 0.0),
            c(-0.025, 0.025),
        ];
        let p = AlgebraParams::new(4, &nu).unwrap();
        assert!(commutator_residual(&p, 4, 16) < 1e-10);
    }

    #[test]
    fn first_order_commutator_is_flat_profile_step() {
        // [Y, Z] z^m = (1 + beta_hat[m mod lambda]) z^m
        let p = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        let y = BandOperator::dunkl(&p);
        let z = BandOperator::z_mul();
        for m in 0..9u64 {
            let mono = DensePoly::monomial(m as usize);
            let comm = y
                .apply(&z.apply(&mono))
                .sub(&z.apply(&y.apply(&mono)));
            let want = c(1.0, 0.0) + p.beta_hat(m as usize);
            assert!((comm.coeff(m as usize) - want).norm() < 1e-14);
        }
    }
}
