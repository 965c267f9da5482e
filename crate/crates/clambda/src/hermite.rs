//! Generalized Hermite families attached to a parameter set.
//!
//! The monic family is built by any of three independent routes, which the
//! verification suites compare against each other:
//!
//! * `Operational`: `H_n = exp(-Y^lambda/lambda) z^n`,
//! * `Explicit`: the alternating sum
//!   `H_n = sum_k (-1)^k [n]! / (lambda^k k! [n-k lambda]!) z^{n-k lambda}`,
//! * `Recurrence`: monomial seeds `H_n = z^n` for `n <= lambda-1`, then
//!   `H_{n+1} = z H_n - gamma_n H_{n-lambda+1}` with
//!   `gamma_n = [n][n-1]...[n-lambda+2]`.
//!
//! Each `H_n` touches only the exponents congruent to `n` mod lambda; all
//! three routes preserve that structurally (the other coefficients are
//! exact zeros, not small ones).

use num_complex::Complex64;

use crate::error::Error;
use crate::ops::{exp_neg_dunkl_power, BandOperator};
use crate::params::AlgebraParams;
use crate::poly::{check_degree, rel_distance, DensePoly};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Operational,
    Explicit,
    Recurrence,
}

pub struct HermiteFamily {
    params: AlgebraParams,
    monic: Vec<DensePoly>,
    normalized: Option<Vec<DensePoly>>,
}

impl HermiteFamily {
    /// Builds `H_0 ... H_{max_degree}` by the requested route. When the
    /// positivity flag holds, the normalized family `H_n / sqrt([n]!)` is
    /// cached alongside.
    pub fn build(params: &AlgebraParams, max_degree: usize, route: Route) -> Self {
        let monic = match route {
            Route::Operational => build_operational(params, max_degree),
            Route::Explicit => build_explicit(params, max_degree),
            Route::Recurrence => build_recurrence(params, max_degree),
        };
        let normalized = params.flags().positive.then(|| {
            let facts = params.deformed_factorials(max_degree as u64);
            monic
                .iter()
                .zip(&facts)
                .map(|(h, f)| h.scale(1.0 / f.sqrt()))
                .collect()
        });
        HermiteFamily {
            params: params.clone(),
            monic,
            normalized,
        }
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn max_degree(&self) -> usize {
        self.monic.len() - 1
    }

    pub fn monic(&self, n: usize) -> Result<&DensePoly> {
        check_degree(n, self.monic.len())?;
        Ok(&self.monic[n])
    }

    /// `H_n / sqrt([n]!)`; needs the positivity flag.
    pub fn normalized(&self, n: usize) -> Result<&DensePoly> {
        let family = self
            .normalized
            .as_ref()
            .ok_or(Error::PositivityRequired("normalized family"))?;
        check_degree(n, family.len())?;
        Ok(&family[n])
    }

    /// Relative deviation of `Y H_n = [n] H_{n-1}`.
    pub fn lowering_residual(&self, n: usize) -> Result<f64> {
        check_degree(n, self.monic.len())?;
        let y = BandOperator::dunkl(&self.params);
        let lhs = y.apply(&self.monic[n]);
        let rhs = if n == 0 {
            DensePoly::zero()
        } else {
            self.monic[n - 1].scale(self.params.deformed_number(n as u64))
        };
        Ok(rel_distance(&lhs, &rhs))
    }

    /// Relative deviation of `(z - Y^{lambda-1}) H_n = H_{n+1}`.
    pub fn raising_residual(&self, n: usize) -> Result<f64> {
        check_degree(n + 1, self.monic.len())?;
        let raised = self.apply_raising(&self.monic[n]);
        Ok(rel_distance(&raised, &self.monic[n + 1]))
    }

    /// Relative deviation of the two factorized eigenvalue equations
    /// `Y (z - Y^{lambda-1}) H_n = [n+1] H_n` and
    /// `(z - Y^{lambda-1}) Y H_n = [n] H_n`.
    pub fn eigen_residual(&self, n: usize) -> Result<f64> {
        check_degree(n, self.monic.len())?;
        let h = &self.monic[n];
        let y = BandOperator::dunkl(&self.params);

        let lhs = y.apply(&self.apply_raising(h));
        let rhs = h.scale(self.params.deformed_number(n as u64 + 1));
        let first = rel_distance(&lhs, &rhs);

        let lhs = self.apply_raising(&y.apply(h));
        let rhs = h.scale(self.params.deformed_number(n as u64));
        Ok(first.max(rel_distance(&lhs, &rhs)))
    }

    /// Whether `H_n` touches only exponents congruent to `n` mod lambda,
    /// with exact zeros elsewhere.
    pub fn symmetry_exact(&self, n: usize) -> Result<bool> {
        check_degree(n, self.monic.len())?;
        let lambda = self.params.lambda();
        Ok(self.monic[n]
            .coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| (n - i) % lambda == 0 || (c.re == 0.0 && c.im == 0.0)))
    }

    fn apply_raising(&self, f: &DensePoly) -> DensePoly {
        let y_dm1 = BandOperator::dunkl_power(&self.params, self.params.d() as u32);
        f.shift_up(1).sub(&y_dm1.apply(f))
    }
}

fn build_operational(params: &AlgebraParams, max_degree: usize) -> Vec<DensePoly> {
    (0..=max_degree)
        .map(|n| exp_neg_dunkl_power(params, &DensePoly::monomial(n)))
        .collect()
}

fn build_explicit(params: &AlgebraParams, max_degree: usize) -> Vec<DensePoly> {
    let lambda = params.lambda();
    (0..=max_degree)
        .map(|n| {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
            let mut denom = 1.0; // lambda^k k!
            let mut sign = 1.0;
            for k in 0..=(n / lambda) {
                if k > 0 {
                    denom *= lambda as f64 * k as f64;
                    sign = -sign;
                }
                let m = n - k * lambda;
                let ratio = params.deformed_factorial_ratio(n as u64, m as u64);
                coeffs[m] = ratio * (sign / denom);
            }
            DensePoly::from_coeffs(coeffs)
        })
        .collect()
}

fn build_recurrence(params: &AlgebraParams, max_degree: usize) -> Vec<DensePoly> {
    let lambda = params.lambda();
    let mut out: Vec<DensePoly> = (0..=max_degree.min(lambda - 1))
        .map(DensePoly::monomial)
        .collect();
    for n in (lambda - 1)..max_degree {
        let gamma = params.recurrence_gamma(n as u64);
        let mut next = out[n].shift_up(1);
        next.add_scaled_assign(-gamma, &out[n + 1 - lambda]);
        out.push(next);
    }
    out
}

/// Coefficients `[m]! / (lambda^n n! [m - n lambda]!)` of the monomial
/// expansion `z^m = sum_n c_n H_{m - n lambda}`.
pub fn inversion_coefficients(params: &AlgebraParams, m: usize) -> Vec<Complex64> {
    let lambda = params.lambda();
    let mut denom = 1.0;
    (0..=(m / lambda))
        .map(|n| {
            if n > 0 {
                denom *= lambda as f64 * n as f64;
            }
            params.deformed_factorial_ratio(m as u64, (m - n * lambda) as u64) / denom
        })
        .collect()
}

/// Relative deviation of the inversion `z^m = sum_n c_n H_{m - n lambda}`.
pub fn inversion_residual(fam: &HermiteFamily, m: usize) -> Result<f64> {
    check_degree(m, fam.max_degree() + 1)?;
    let lambda = fam.params().lambda();
    let mut acc = DensePoly::zero();
    for (n, c) in inversion_coefficients(fam.params(), m).into_iter().enumerate() {
        acc.add_scaled_assign(c, fam.monic(m - n * lambda)?);
    }
    Ok(rel_distance(&acc, &DensePoly::monomial(m)))
}

/// Compares the product expansion of
/// `exp(-t^lambda/lambda) E(x0 t) = sum_n H_n(x0) t^n / [n]!`
/// coefficient by coefficient through `t^t_order` and returns the largest
/// absolute deviation.
pub fn generating_function_residual(
    fam: &HermiteFamily,
    x0: Complex64,
    t_order: usize,
) -> Result<f64> {
    check_degree(t_order, fam.max_degree() + 1)?;
    let params = fam.params();
    let lambda = params.lambda();
    let facts = params.deformed_factorials(t_order as u64);

    // B(t) = E(x0 t) truncated
    let mut pw = Complex64::new(1.0, 0.0);
    let b: Vec<Complex64> = (0..=t_order)
        .map(|n| {
            let out = pw / facts[n];
            pw *= x0;
            out
        })
        .collect();

    let mut worst = 0.0f64;
    for n in 0..=t_order {
        // coefficient of t^n in exp(-t^lambda/lambda) B(t)
        let mut coeff = Complex64::new(0.0, 0.0);
        let mut a = Complex64::new(1.0, 0.0); // (-1/lambda)^k / k!
        let mut k = 0usize;
        while k * lambda <= n {
            if k > 0 {
                a *= -1.0 / (lambda as f64 * k as f64);
            }
            coeff += a * b[n - k * lambda];
            k += 1;
        }
        let target = fam.monic(n)?.eval(x0) / facts[n];
        worst = worst.max((coeff - target).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn reference_polynomials_two_cycle() {
        for route in [Route::Operational, Route::Explicit, Route::Recurrence] {
            let fam = HermiteFamily::build(&two_cycle(), 6, route);
            let h2 = fam.monic(2).unwrap();
            assert!((h2.coeff(0) - c(-2.0, 0.0)).norm() < 1e-13, "{route:?}");
            let h3 = fam.monic(3).unwrap();
            assert!((h3.coeff(1) - c(-4.0, 0.0)).norm() < 1e-13, "{route:?}");
            let h4 = fam.monic(4).unwrap();
            assert!((h4.coeff(0) - c(8.0, 0.0)).norm() < 1e-13, "{route:?}");
            assert!((h4.coeff(2) - c(-8.0, 0.0)).norm() < 1e-13, "{route:?}");
            let h6 = fam.monic(6).unwrap();
            for (i, want) in [(0, -48.0), (2, 72.0), (4, -18.0), (6, 1.0)] {
                assert!((h6.coeff(i) - c(want, 0.0)).norm() < 1e-12, "{route:?}");
            }
        }
    }

    #[test]
    fn reference_polynomials_three_cycle() {
        let fam = HermiteFamily::build(&three_cycle_zero(), 4, Route::Recurrence);
        let h3 = fam.monic(3).unwrap();
        assert!((h3.coeff(0) - c(-2.0, 0.0)).norm() < 1e-14);
        let h4 = fam.monic(4).unwrap();
        assert!((h4.coeff(1) - c(-8.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn scaled_two_cycle_profile() {
        // nu = (1.3, -1.3): H_5 = z^5 - 15.2 z^3 + 42.56 z
        let p = AlgebraParams::new(2, &[c(1.3, 0.0), c(-1.3, 0.0)]).unwrap();
        let fam = HermiteFamily::build(&p, 5, Route::Explicit);
        let h5 = fam.monic(5).unwrap();
        assert!((h5.coeff(1) - c(42.56, 0.0)).norm() < 1e-12);
        assert!((h5.coeff(3) - c(-15.2, 0.0)).norm() < 1e-12);
        assert!((h5.coeff(5) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mixed_profile_reference_polynomial() {
        let p = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        let fam = HermiteFamily::build(&p, 5, Route::Operational);
        let h5 = fam.monic(5).unwrap();
        assert!((h5.coeff(2) - c(-24.44, -0.43301270189221932338)).norm() < 1e-12);
        assert!((h5.coeff(5) - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(h5.coeff(0), c(0.0, 0.0));
        assert_eq!(h5.coeff(3), c(0.0, 0.0));
    }

    #[test]
    fn routes_agree_on_mixed_profile() {
        let p = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        let a = HermiteFamily::build(&p, 14, Route::Operational);
        let b = HermiteFamily::build(&p, 14, Route::Explicit);
        let r = HermiteFamily::build(&p, 14, Route::Recurrence);
        for n in 0..=14 {
            let (pa, pb, pr) = (a.monic(n).unwrap(), b.monic(n).unwrap(), r.monic(n).unwrap());
            assert!(rel_distance(pa, pb) < 1e-12, "n={n}");
            assert!(rel_distance(pa, pr) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn ladder_and_eigen_relations() {
        let fam = HermiteFamily::build(&two_cycle(), 12, Route::Recurrence);
        for n in 0..12 {
            assert!(fam.lowering_residual(n).unwrap() < 1e-13, "n={n}");
            assert!(fam.raising_residual(n).unwrap() < 1e-13, "n={n}");
            assert!(fam.eigen_residual(n).unwrap() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn symmetry_is_structural() {
        let fam = HermiteFamily::build(&three_cycle_zero(), 13, Route::Operational);
        for n in 0..=13 {
            assert!(fam.symmetry_exact(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn normalization_needs_positivity() {
        let fam = HermiteFamily::build(&two_cycle(), 4, Route::Explicit);
        // [2]! = 4, so H~_2 = (z^2 - 2)/2
        let h2 = fam.normalized(2).unwrap();
        assert!((h2.coeff(2) - c(0.5, 0.0)).norm() < 1e-14);

        let p = AlgebraParams::new(2, &[c(0.0, 0.5), c(0.0, -0.5)]).unwrap();
        assert!(!p.flags().positive);
        let fam = HermiteFamily::build(&p, 4, Route::Explicit);
        assert!(matches!(
            fam.normalized(2),
            Err(Error::PositivityRequired(_))
        ));
    }

    #[test]
    fn inversion_reference_coefficients() {
        let p = three_cycle_zero();
        let coeffs = inversion_coefficients(&p, 4);
        assert_eq!(coeffs.len(), 2);
        assert!((coeffs[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((coeffs[1] - c(8.0, 0.0)).norm() < 1e-14);

        let fam = HermiteFamily::build(&p, 9, Route::Recurrence);
        for m in 0..=9 {
            assert!(inversion_residual(&fam, m).unwrap() < 1e-13, "m={m}");
        }
    }

    #[test]
    fn generating_function_small_orders() {
        let fam = HermiteFamily::build(&two_cycle(), 14, Route::Explicit);
        assert!(generating_function_residual(&fam, c(1.0, 0.0), 14).unwrap() < 1e-12);
        let p = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        let fam = HermiteFamily::build(&p, 14, Route::Recurrence);
        assert!(generating_function_residual(&fam, c(-2.0, 1.0), 14).unwrap() < 1e-10);
    }

    #[test]
    fn out_of_range_degree_is_reported() {
        let fam = HermiteFamily::build(&two_cycle(), 4, Route::Explicit);
        assert!(matches!(
            fam.monic(5),
            Err(Error::DegreeOutOfRange { got: 5, max: 4 })
        ));
    }
}
