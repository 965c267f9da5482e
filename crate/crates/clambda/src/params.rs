//! Algebra parameters and deformed integer arithmetic.
//!
//! A parameter set is a cycle length `lambda >= 2` together with a
//! deformation vector `nu = (nu_0, ..., nu_{lambda-1})` summing to zero.
//! Everything else is derived from it:
//!
//! * the DFT profile `nu_hat[s] = sum_l nu_l eps^{s l}`,
//! * the deformed integers `[n] = n + nu_hat[n mod lambda]` and their
//!   factorials,
//! * the recurrence data `alpha_k = (k + nu_hat[k]) / lambda`,
//!   `beta_i = nu_i (eps^i - 1)` and
//!   `beta_hat[j] = nu_hat[j+1] - nu_hat[j]` (cyclically),
//! * structural flags used as preconditions elsewhere.
//!
//! Powers of the primitive root `eps = e^{2 pi i / lambda}` are tracked as
//! integers mod lambda and resolved through a fixed table, so phases never
//! drift: `eps^(10^9)` is one lookup. Table entries on the real or imaginary
//! axis are stored exactly.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dd::{Cdd, Dd};
use crate::error::Error;
use crate::Result;

/// Default relative tolerance for validation and verification helpers.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Arithmetic used when accumulating deformed factorials.
///
/// `Extended` runs the forward recurrence in double-double (~106-bit
/// significand); `Double` uses plain f64 products. Extended is the default:
/// factorial magnitudes near degree 30 reach 1e32 and the relative headroom
/// of plain doubles is what the verification tolerances would otherwise eat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

/// Structural properties of a parameter set, decided once at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// `nu_{lambda-i} = -eps^i nu_i` for all `i = 1..lambda-1`.
    pub hermitian: bool,
    /// Every `nu_hat[s]` is real and `s + nu_hat[s] > 0` for `s >= 1`, so
    /// all deformed integers `[n]` with `n >= 1` are positive. This is the
    /// precondition for normalized families, inner products and truncated
    /// ladder matrices.
    pub positive: bool,
}

#[derive(Debug)]
struct Inner {
    lambda: usize,
    nu: Vec<Complex64>,
    nu_hat: Vec<Complex64>,
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
    beta_hat: Vec<Complex64>,
    roots: Vec<Complex64>,
    flags: Flags,
    tol: f64,
    precision: Precision,
}

/// Immutable, cheaply clonable parameter set.
#[derive(Clone, Debug)]
pub struct AlgebraParams {
    inner: Arc<Inner>,
}

/// Table of `eps^j` for `j = 0..lambda`, with entries that land on the real
/// or imaginary axis snapped to their exact values.
pub(crate) fn roots_of_unity(lambda: usize) -> Vec<Complex64> {
    (0..lambda)
        .map(|j| {
            let four_j = 4 * j;
            if four_j % lambda == 0 {
                match four_j / lambda {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / lambda as f64;
                Complex64::new(angle.cos(), angle.sin())
            }
        })
        .collect()
}

impl AlgebraParams {
    /// Builds a parameter set with the default tolerance and precision.
    ///
    /// `nu` may have `lambda` entries (their sum is validated against the
    /// tolerance) or `lambda - 1` entries `(nu_1, ..., nu_{lambda-1})`, in
    /// which case `nu_0 = -sum` is prepended.
    pub fn new(lambda: usize, nu: &[Complex64]) -> Result<Self> {
        Self::with_options(lambda, nu, DEFAULT_TOL, Precision::Extended)
    }

    pub fn with_options(
        lambda: usize,
        nu: &[Complex64],
        tol: f64,
        precision: Precision,
    ) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::InvalidLambda(lambda));
        }
        let nu: Vec<Complex64> = if nu.len() == lambda {
            let sum: Complex64 = nu.iter().sum();
            let scale = nu.iter().map(|v| v.norm()).fold(1.0, f64::max);
            if sum.norm() > tol * scale {
                return Err(Error::NuSumNonzero {
                    magnitude: sum.norm(),
                });
            }
            nu.to_vec()
        } else if nu.len() == lambda - 1 {
            let head: Complex64 = -nu.iter().sum::<Complex64>();
            std::iter::once(head).chain(nu.iter().copied()).collect()
        } else {
            return Err(Error::NuLength {
                lambda,
                got: nu.len(),
            });
        };

        let roots = roots_of_unity(lambda);
        let root = |k: usize| roots[k % lambda];

        let mut nu_hat: Vec<Complex64> = (0..lambda)
            .map(|s| (0..lambda).map(|l| nu[l] * root(s * l)).sum())
            .collect();
        // nu_hat[0] is the validated sum of nu; pin it to its exact value so
        // [0] = 0 holds exactly and lowering kills constants without residue.
        nu_hat[0] = Complex64::new(0.0, 0.0);

        let alpha: Vec<Complex64> = (1..lambda)
            .map(|k| (Complex64::new(k as f64, 0.0) + nu_hat[k]) / lambda as f64)
            .collect();
        let beta: Vec<Complex64> = (1..lambda)
            .map(|i| nu[i] * (root(i) - 1.0))
            .collect();
        let beta_hat: Vec<Complex64> = (0..lambda)
            .map(|j| nu_hat[(j + 1) % lambda] - nu_hat[j])
            .collect();

        let nu_scale = nu.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let hermitian = (1..lambda).all(|i| (nu[lambda - i] + root(i) * nu[i]).norm() <= tol * nu_scale);
        let positive = (1..lambda).all(|s| {
            nu_hat[s].im.abs() <= tol * nu_scale.max(nu_hat[s].norm())
                && s as f64 + nu_hat[s].re > 0.0
        });

        Ok(AlgebraParams {
            inner: Arc::new(Inner {
                lambda,
                nu,
                nu_hat,
                alpha,
                beta,
                beta_hat,
                roots,
                flags: Flags {
                    hermitian,
                    positive,
                },
                tol,
                precision,
            }),
        })
    }

    pub fn lambda(&self) -> usize {
        self.inner.lambda
    }

    /// Orthogonality order `d = lambda - 1`.
    pub fn d(&self) -> usize {
        self.inner.lambda - 1
    }

    pub fn nu(&self) -> &[Complex64] {
        &self.inner.nu
    }

    /// DFT profile `nu_hat[s]`, `s = 0..lambda`, with `nu_hat[0] = 0`.
    pub fn nu_hat(&self) -> &[Complex64] {
        &self.inner.nu_hat
    }

    /// `alpha_k = (k + nu_hat[k]) / lambda` for `k = 1..=lambda-1`.
    pub fn alpha(&self, k: usize) -> Complex64 {
        self.inner.alpha[k - 1]
    }

    /// `beta_i = nu_i (eps^i - 1)` for `i = 1..=lambda-1`.
    pub fn beta(&self, i: usize) -> Complex64 {
        self.inner.beta[i - 1]
    }

    /// `beta_hat[j] = nu_hat[(j+1) mod lambda] - nu_hat[j]`.
    pub fn beta_hat(&self, j: usize) -> Complex64 {
        self.inner.beta_hat[j % self.inner.lambda]
    }

    pub fn flags(&self) -> Flags {
        self.inner.flags
    }

    pub fn tol(&self) -> f64 {
        self.inner.tol
    }

    pub fn precision(&self) -> Precision {
        self.inner.precision
    }

    /// `eps^k` through the exact table; `k` may be any integer.
    pub fn epsilon_pow(&self, k: i64) -> Complex64 {
        let lambda = self.inner.lambda as i64;
        self.inner.roots[k.rem_euclid(lambda) as usize]
    }

    /// Geometric sum `1 + eps^i + ... + eps^{i(n-1)}`, i.e. the value of
    /// `(eps^{in} - 1)/(eps^i - 1)` computed without the division.
    pub fn epsilon_geom_sum(&self, i: i64, n: u64) -> Complex64 {
        let lambda = self.inner.lambda as u64;
        let full = (n / lambda) as f64;
        let rest = n % lambda;
        // one full period of eps^{il} sums to 0 unless i = 0 mod lambda
        let mut acc = if i.rem_euclid(self.inner.lambda as i64) == 0 {
            Complex64::new(full * lambda as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for l in 0..rest {
            acc += self.epsilon_pow(i * l as i64);
        }
        acc
    }

    /// Deformed integer `[n] = n + nu_hat[n mod lambda]`; `[0] = 0` exactly.
    pub fn deformed_number(&self, n: u64) -> Complex64 {
        Complex64::new(n as f64, 0.0) + self.inner.nu_hat[(n % self.inner.lambda as u64) as usize]
    }

    /// Deformed factorial `[n]! = [1][2]...[n]`, `[0]! = 1`.
    pub fn deformed_factorial(&self, n: u64) -> Complex64 {
        self.deformed_factorial_ratio(n, 0)
    }

    /// `[n]!/[m]!` for `m <= n`, accumulated as the product `[m+1]...[n]`.
    pub fn deformed_factorial_ratio(&self, n: u64, m: u64) -> Complex64 {
        debug_assert!(m <= n);
        match self.inner.precision {
            Precision::Extended => {
                let mut acc = Cdd::ONE;
                for k in (m + 1)..=n {
                    acc = acc.mul_c64(self.deformed_number(k));
                }
                acc.value()
            }
            Precision::Double => {
                let mut acc = Complex64::new(1.0, 0.0);
                for k in (m + 1)..=n {
                    acc *= self.deformed_number(k);
                }
                acc
            }
        }
    }

    /// All factorials `[0]!, ..., [n]!` in one forward pass.
    pub fn deformed_factorials(&self, n: u64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n as usize + 1);
        match self.inner.precision {
            Precision::Extended => {
                let mut acc = Cdd::ONE;
                out.push(acc.value());
                for k in 1..=n {
                    acc = acc.mul_c64(self.deformed_number(k));
                    out.push(acc.value());
                }
            }
            Precision::Double => {
                let mut acc = Complex64::new(1.0, 0.0);
                out.push(acc);
                for k in 1..=n {
                    acc *= self.deformed_number(k);
                    out.push(acc);
                }
            }
        }
        out
    }

    /// Characteristic multi-index of the sector `s`: a vector of length
    /// `lambda` starting with 1, followed by `alpha_1+1, ..., alpha_s+1`,
    /// then `alpha_{s+1}, ..., alpha_{lambda-1}`.
    pub fn multi_index(&self, s: usize) -> Result<Vec<Complex64>> {
        let lambda = self.inner.lambda;
        if s >= lambda {
            return Err(Error::IndexOutOfRange {
                what: "sector",
                got: s,
                max: lambda - 1,
            });
        }
        let mut out = Vec::with_capacity(lambda);
        out.push(Complex64::new(1.0, 0.0));
        for k in 1..lambda {
            let a = self.inner.alpha[k - 1];
            out.push(if k <= s { a + 1.0 } else { a });
        }
        Ok(out)
    }

    /// Product `[n][n-1]...[n-lambda+2]` (lambda-1 factors), the monic
    /// recurrence coefficient. Requires `n >= lambda - 1`.
    pub fn recurrence_gamma(&self, n: u64) -> Complex64 {
        let lambda = self.inner.lambda as u64;
        debug_assert!(n + 1 >= lambda);
        let mut acc = Cdd::ONE;
        for j in 0..(lambda - 1) {
            acc = acc.mul_c64(self.deformed_number(n - j));
        }
        acc.value()
    }
}

/// Checks the factorial shear: `[n lambda + s]!` equals
/// `lambda^{n lambda + s} n! prod_{k<=s} (alpha_k)_{n+1} prod_{k>s} (alpha_k)_n`.
/// Returns the relative deviation between the two evaluations.
pub fn factorization_residual(p: &AlgebraParams, n: u64, s: u64) -> f64 {
    let lambda = p.lambda() as u64;
    debug_assert!(s < lambda);
    let m = n * lambda + s;
    let lhs = p.deformed_factorial(m);

    let mut rhs = Dd::ONE;
    for k in 1..=n {
        rhs = rhs.mul_f64(k as f64);
    }
    for _ in 0..m {
        rhs = rhs.mul_f64(p.lambda() as f64);
    }
    let mut acc = Cdd::ONE.mul_c64(Complex64::new(rhs.value(), 0.0));
    for k in 1..lambda {
        let a = p.alpha(k as usize);
        let reps = if k <= s { n + 1 } else { n };
        for j in 0..reps {
            acc = acc.mul_c64(a + j as f64);
        }
    }
    let rhs = acc.value();
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0)
}

/// Draws a deformation vector whose parameter set comes out with both the
/// hermitian and the positive flag. Sampling happens in profile space: pick
/// real `nu_hat` values obeying the reflection constraints with magnitude
/// below 0.85 (so `s + nu_hat[s] > 0` is automatic) and transform back.
pub fn sample_hermitian_positive<R: Rng + ?Sized>(lambda: usize, rng: &mut R) -> Vec<Complex64> {
    assert!(lambda >= 2);
    const BOUND: f64 = 0.85;
    let mut t = vec![0.0f64; lambda];
    let c = rng.gen_range(-BOUND..BOUND);
    t[1] = c;
    for u in 2..lambda {
        let v = lambda + 1 - u;
        match u.cmp(&v) {
            std::cmp::Ordering::Less => {
                let lo = (c - BOUND).max(-BOUND);
                let hi = (c + BOUND).min(BOUND);
                t[u] = rng.gen_range(lo..hi);
                t[v] = c - t[u];
            }
            std::cmp::Ordering::Equal => t[u] = c / 2.0,
            std::cmp::Ordering::Greater => {}
        }
    }
    let roots = roots_of_unity(lambda);
    let minus_pow = |k: usize| roots[(lambda - k % lambda) % lambda];
    (0..lambda)
        .map(|l| {
            (0..lambda)
                .map(|s| t[s] * minus_pow(l * s))
                .sum::<Complex64>()
                / lambda as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
    }

    fn two_cycle_half() -> AlgebraParams {
        AlgebraParams::new(2, &[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap()
    }

    fn three_cycle_mixed() -> AlgebraParams {
        AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            AlgebraParams::new(1, &[]),
            Err(Error::InvalidLambda(1))
        ));
        assert!(matches!(
            AlgebraParams::new(3, &[c(1.0, 0.0)]),
            Err(Error::NuLength { lambda: 3, got: 1 })
        ));
        assert!(matches!(
            AlgebraParams::new(2, &[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NuSumNonzero { .. })
        ));
    }

    #[test]
    fn short_nu_gets_head_prepended() {
        let p = AlgebraParams::new(2, &[c(-0.5, 0.0)]).unwrap();
        assert_eq!(p.nu()[0], c(0.5, 0.0));
        assert_eq!(p.nu()[1], c(-0.5, 0.0));
    }

    #[test]
    fn two_cycle_derived_data() {
        let p = two_cycle_half();
        assert_eq!(p.nu_hat()[0], c(0.0, 0.0));
        assert!(close(p.nu_hat()[1], c(1.0, 0.0), 1e-15));
        assert!(close(p.alpha(1), c(1.0, 0.0), 1e-15));
        assert!(close(p.beta(1), c(1.0, 0.0), 1e-15));
        assert!(close(p.beta_hat(0), c(1.0, 0.0), 1e-15));
        assert!(close(p.beta_hat(1), c(-1.0, 0.0), 1e-15));
        assert!(p.flags().hermitian);
        assert!(p.flags().positive);
    }

    #[test]
    fn two_cycle_deformed_numbers() {
        let p = two_cycle_half();
        assert_eq!(p.deformed_number(0), c(0.0, 0.0));
        assert!(close(p.deformed_number(3), c(4.0, 0.0), 1e-15));
        assert!(close(p.deformed_number(4), c(4.0, 0.0), 1e-15));
        assert!(close(p.deformed_factorial(3), c(16.0, 0.0), 1e-15));
        assert!(close(p.deformed_factorial(8), c(147456.0, 0.0), 1e-15));
        // degree-30 territory, where the double-double accumulator matters
        assert!(close(
            p.deformed_factorial(24),
            c(3.849406932415634473e24, 0.0),
            1e-13
        ));
    }

    #[test]
    fn three_cycle_profile_is_conjugate_pair() {
        let p = three_cycle_mixed();
        let expect = c(0.45, 0.43301270189221932338);
        assert!(close(p.nu_hat()[1], expect, 1e-15));
        assert!(close(p.nu_hat()[2], expect.conj(), 1e-15));
        assert!(close(p.deformed_number(5), c(5.45, -0.43301270189221932338), 1e-15));
        assert!(close(
            p.deformed_factorial(5),
            c(273.6543, 36.606893817968221599),
            1e-14
        ));
        assert!(!p.flags().positive);
    }

    #[test]
    fn multi_index_examples() {
        let p = two_cycle_half();
        assert_eq!(p.multi_index(0).unwrap(), vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.multi_index(1).unwrap(), vec![c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(p.multi_index(2).is_err());

        let p0 = AlgebraParams::new(3, &[c(0.0, 0.0); 3]).unwrap();
        let idx = p0.multi_index(0).unwrap();
        assert!(close(idx[1], c(1.0 / 3.0, 0.0), 1e-15));
        assert!(close(idx[2], c(2.0 / 3.0, 0.0), 1e-15));
    }

    #[test]
    fn beta_hat_is_dft_of_beta() {
        let p = three_cycle_mixed();
        for j in 0..3 {
            let dft: Complex64 = (1..3)
                .map(|i| p.epsilon_pow((i * j) as i64) * p.beta(i))
                .sum();
            assert!(close(dft, p.beta_hat(j), 1e-14));
        }
        let total: Complex64 = (0..3).map(|j| p.beta_hat(j)).sum();
        assert!(total.norm() < 1e-15);
    }

    #[test]
    fn epsilon_powers_are_periodic_and_exact() {
        let p = AlgebraParams::new(4, &[c(0.0, 0.0); 4]).unwrap();
        assert_eq!(p.epsilon_pow(0), c(1.0, 0.0));
        assert_eq!(p.epsilon_pow(1), c(0.0, 1.0));
        assert_eq!(p.epsilon_pow(2), c(-1.0, 0.0));
        assert_eq!(p.epsilon_pow(-1), c(0.0, -1.0));
        assert_eq!(p.epsilon_pow(1_000_000_001), p.epsilon_pow(1));
    }

    #[test]
    fn geom_sum_matches_division_form() {
        let p = three_cycle_mixed();
        for i in 1..3i64 {
            for n in 1..12u64 {
                let direct = p.epsilon_geom_sum(i, n);
                let eps_i = p.epsilon_pow(i);
                let by_div = (p.epsilon_pow(i * n as i64) - 1.0) / (eps_i - 1.0);
                assert!(close(direct, by_div, 1e-13));
            }
        }
        assert!(close(
            p.epsilon_geom_sum(0, 7),
            c(7.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn factorization_holds_for_mixed_profile() {
        let p = three_cycle_mixed();
        for n in 0..6 {
            for s in 0..3 {
                assert!(factorization_residual(&p, n, s) < 1e-13);
            }
        }
    }

    #[test]
    fn precisions_agree_to_double_accuracy() {
        let nu = [c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)];
        let ext = AlgebraParams::with_options(3, &nu, DEFAULT_TOL, Precision::Extended).unwrap();
        let dbl = AlgebraParams::with_options(3, &nu, DEFAULT_TOL, Precision::Double).unwrap();
        for n in 0..40 {
            assert!(close(
                ext.deformed_factorial(n),
                dbl.deformed_factorial(n),
                1e-12
            ));
        }
    }

    #[test]
    fn sampled_vectors_carry_both_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for lambda in 2..=6 {
            for _ in 0..5 {
                let nu = sample_hermitian_positive(lambda, &mut rng);
                let p = AlgebraParams::new(lambda, &nu).unwrap();
                assert!(p.flags().hermitian, "lambda={lambda} nu={nu:?}");
                assert!(p.flags().positive, "lambda={lambda} nu={nu:?}");
            }
        }
    }

    #[test]
    fn fixed_four_cycle_sample_matches_hand_transform() {
        // profile (0, 0.4, 0.1, 0.3) transforms back to exact rationals
        let nu = [
            c(0.2, 0.0),
            c(-0.025, -0.025),
            c(-0.15, 0.0),
            c(-0.025, 0.025),
        ];
        let p = AlgebraParams::new(4, &nu).unwrap();
        assert!(p.flags().hermitian);
        assert!(p.flags().positive);
        for (s, want) in [0.0, 0.4, 0.1, 0.3].into_iter().enumerate() {
            assert!(close(p.nu_hat()[s], c(want, 0.0), 1e-14));
        }
        for (j, want) in [0.4, -0.3, 0.2, -0.3].into_iter().enumerate() {
            assert!(close(p.beta_hat(j), c(want, 0.0), 1e-14));
        }
    }

    #[test]
    fn positive_profile_gives_conjugate_beta_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let nu = sample_hermitian_positive(5, &mut rng);
        let p = AlgebraParams::new(5, &nu).unwrap();
        for i in 1..5 {
            assert!(close(p.beta(i).conj(), p.beta(5 - i), 1e-12));
        }
    }

    #[test]
    fn recurrence_gamma_is_factorial_ratio() {
        let p = three_cycle_mixed();
        for n in 2..12u64 {
            let ratio = p.deformed_factorial_ratio(n, n - 2);
            assert!(close(p.recurrence_gamma(n), ratio, 1e-14));
        }
    }
}
