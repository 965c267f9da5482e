//! Series model: the deformed exponential, its hypergeometric resummation,
//! the weighted inner product, the reproducing kernel, and the oscillator
//! spectrum.
//!
//! The deformed exponential `E(z) = sum_n z^n / [n]!` replaces `exp` as the
//! generating kernel of the model. Splitting the sum by residue class mod
//! lambda turns each class into a generalized hypergeometric series, which
//! gives an independent evaluation route:
//!
//! `E(z) = sum_{s<lambda} z^s/[s]! 0F_{lambda-1}(; D'(s); (z/lambda)^lambda)`
//!
//! where `D'(s)` is the sector multi-index without its leading 1.

use num_complex::Complex64;

use crate::error::Error;
use crate::ops::BandOperator;
use crate::params::AlgebraParams;
use crate::poly::{rel_gap, DensePoly};
use crate::Result;

/// Truncated entire function with cached Taylor coefficients.
pub struct SeriesFunction {
    coeffs: Vec<Complex64>,
    tol: f64,
}

impl SeriesFunction {
    /// The deformed exponential through degree `truncation`.
    pub fn gen_exp(params: &AlgebraParams, truncation: usize) -> Self {
        let facts = params.deformed_factorials(truncation as u64);
        SeriesFunction {
            coeffs: facts.iter().map(|f| f.inv()).collect(),
            tol: params.tol(),
        }
    }

    /// Kernel section `z -> K(w, z) = E(z conj(w))` through degree
    /// `truncation`; the coefficients are `conj(w)^n / [n]!`.
    pub fn kernel_section(params: &AlgebraParams, w: Complex64, truncation: usize) -> Self {
        let facts = params.deformed_factorials(truncation as u64);
        let mut pw = Complex64::new(1.0, 0.0);
        let coeffs = facts
            .iter()
            .map(|f| {
                let out = pw / f;
                pw *= w.conj();
                out
            })
            .collect();
        SeriesFunction {
            coeffs,
            tol: params.tol(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn as_poly(&self) -> DensePoly {
        DensePoly::from_coeffs(self.coeffs.iter().copied())
    }

    /// Evaluates the truncated series, refusing arguments for which the
    /// last retained term is not yet below the tolerance.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let t = self.truncation();
        let tail = z.norm().powi(t as i32) * self.coeffs[t].norm();
        if !(tail < self.tol) {
            return Err(Error::TruncationTooLow {
                tail,
                tol: self.tol,
            });
        }
        Ok(self.as_poly().eval(z))
    }
}

/// `E(z)` by direct summation through `truncation`.
pub fn gen_exp_series(params: &AlgebraParams, z: Complex64, truncation: usize) -> Result<Complex64> {
    SeriesFunction::gen_exp(params, truncation).eval(z)
}

/// `0F_q(; b; w)` by term recurrence. Errors on nonpositive-integer
/// denominator parameters; the series is entire, so convergence at fixed
/// `w` is a (generous) iteration cap away.
fn hypergeom_0q(b: &[Complex64], w: Complex64) -> Result<Complex64> {
    for bi in b {
        let near_int = (bi.re - bi.re.round()).abs() < 1e-12 && bi.im.abs() < 1e-12;
        if near_int && bi.re.round() <= 0.0 {
            return Err(Error::HypergeometricPole {
                value: format!("{bi}"),
            });
        }
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..1000u32 {
        let mut denom = Complex64::new(n as f64 + 1.0, 0.0);
        for bi in b {
            denom *= bi + n as f64;
        }
        term *= w / denom;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::TruncationTooLow {
        tail: term.norm(),
        tol: 1e-18,
    })
}

/// `E(z)` through the sector decomposition into `0F_{lambda-1}` series.
pub fn gen_exp_hypergeom(params: &AlgebraParams, z: Complex64) -> Result<Complex64> {
    let lambda = params.lambda();
    let w = (z / lambda as f64).powu(lambda as u32);
    let facts = params.deformed_factorials(lambda as u64 - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zs = Complex64::new(1.0, 0.0);
    for s in 0..lambda {
        let idx = params.multi_index(s)?;
        let f = hypergeom_0q(&idx[1..], w)?;
        acc += zs / facts[s] * f;
        zs *= z;
    }
    Ok(acc)
}

/// Weighted inner product `<f, g> = sum_n f_n conj(g_n) [n]!`,
/// conjugate-linear in the second argument. Needs the positivity flag,
/// which makes the weights positive.
pub fn bargmann_inner(params: &AlgebraParams, f: &DensePoly, g: &DensePoly) -> Result<Complex64> {
    if !params.flags().positive {
        return Err(Error::PositivityRequired("inner product"));
    }
    let n = f.coeffs().len().min(g.coeffs().len());
    let facts = params.deformed_factorials(n.saturating_sub(1) as u64);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc += f.coeff(i) * g.coeff(i).conj() * facts[i];
    }
    Ok(acc)
}

/// Reproducing kernel `K(w, z) = E(z conj(w))`, truncated.
pub fn kernel_eval(
    params: &AlgebraParams,
    w: Complex64,
    z: Complex64,
    truncation: usize,
) -> Result<Complex64> {
    gen_exp_series(params, z * w.conj(), truncation)
}

/// Oscillator eigenvalue `([n] + [n+1]) / 2` on `z^n`.
pub fn hamiltonian_eigenvalue(params: &AlgebraParams, n: u64) -> Complex64 {
    (params.deformed_number(n) + params.deformed_number(n + 1)) / 2.0
}

/// Checks the display form of the oscillator
/// `H = z d/dz + 1/2 + (1/2) sum_j nu_j (eps^j + 1) S^j`
/// against the eigenvalues on monomials up to `deg`; also checks the
/// anticommutator form `H = (Y Z + Z Y)/2`. Returns the
/// largest relative deviation.
pub fn hamiltonian_residual(params: &AlgebraParams, deg: usize) -> f64 {
    let zd = BandOperator::z_mul().compose(&BandOperator::derivative());
    let y = BandOperator::dunkl(params);
    let z = BandOperator::z_mul();
    let anti = |f: &DensePoly| {
        y.apply(&z.apply(f))
            .add(&z.apply(&y.apply(f)))
            .scale(Complex64::new(0.5, 0.0))
    };

    let mut worst = 0.0f64;
    for n in 0..=deg {
        let mono = DensePoly::monomial(n);
        let mut display = zd.apply(&mono);
        display.add_scaled_assign(Complex64::new(0.5, 0.0), &mono);
        for j in 0..params.lambda() as i64 {
            let weight = params.nu()[j as usize] * (params.epsilon_pow(j) + 1.0) * 0.5;
            display.add_scaled_assign(weight, &BandOperator::reflection(params, j).apply(&mono));
        }
        let val = hamiltonian_eigenvalue(params, n as u64);
        worst = worst.max(rel_gap(display.coeff(n), val));
        worst = worst.max(rel_gap(anti(&mono).coeff(n), val));
    }
    worst
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

    #[test]
    fn series_reference_values() {
        let p = two_cycle();
        let v = gen_exp_series(&p, c(1.0, 0.0), 40).unwrap();
        assert!((v - c(1.8312249817444933628, 0.0)).norm() < 1e-13);
        let v = gen_exp_series(&p, c(-2.0, 1.0), 60).unwrap();
        assert!((v - c(0.5757710851228976459, -0.099754933087879490188)).norm() < 1e-13);

        let p0 = AlgebraParams::new(3, &[c(0.0, 0.0); 3]).unwrap();
        let v = gen_exp_series(&p0, c(1.0, 0.0), 40).unwrap();
        assert!((v - c(std::f64::consts::E, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn truncation_guard_trips() {
        let p = two_cycle();
        assert!(matches!(
            gen_exp_series(&p, c(30.0, 0.0), 10),
            Err(Error::TruncationTooLow { .. })
        ));
    }

    #[test]
    fn even_sector_is_a_bessel_function() {
        // for the half-integer two-cycle profile, the even part of E at
        // z = 1 is I_0(1)
        let p = two_cycle();
        let f = SeriesFunction::gen_exp(&p, 40);
        let even: Complex64 = f
            .coefficients()
            .iter()
            .step_by(2)
            .sum();
        assert!((even - c(1.2660658777520083356, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hypergeometric_route_matches_series() {
        let profiles: Vec<AlgebraParams> = vec![
            two_cycle(),
            AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap(),
            AlgebraParams::new(4, &[c(0.0, 0.0); 4]).unwrap(),
        ];
        let points = [c(1.0, 0.0), c(-2.0, 1.0), c(0.3, -1.7), c(0.0, 0.0)];
        for p in &profiles {
            for &z in &points {
                let a = gen_exp_series(p, z, 60).unwrap();
                let b = gen_exp_hypergeom(p, z).unwrap();
                assert!((a - b).norm() < 1e-12, "lambda={} z={z}", p.lambda());
            }
        }
    }

    #[test]
    fn degenerate_sector_parameter_is_a_pole() {
        // nu = (-0.5, 0.5) gives alpha_1 = 0
        let p = AlgebraParams::new(2, &[c(-0.5, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(matches!(
            gen_exp_hypergeom(&p, c(1.0, 0.0)),
            Err(Error::HypergeometricPole { .. })
        ));
    }

    #[test]
    fn inner_product_weights_are_factorials() {
        let p = two_cycle();
        // <z^n, z^n> = [n]!, cross terms vanish
        let z3 = DensePoly::monomial(3);
        let z2 = DensePoly::monomial(2);
        assert!((bargmann_inner(&p, &z3, &z3).unwrap() - c(16.0, 0.0)).norm() < 1e-13);
        assert_eq!(bargmann_inner(&p, &z3, &z2).unwrap(), c(0.0, 0.0));

        let bad = AlgebraParams::new(2, &[c(0.0, 0.5), c(0.0, -0.5)]).unwrap();
        assert!(matches!(
            bargmann_inner(&bad, &z3, &z3),
            Err(Error::PositivityRequired(_))
        ));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_slot() {
        let p = two_cycle();
        let f = DensePoly::from_coeffs([c(1.0, -2.0), c(0.5, 0.0)]);
        let g = DensePoly::from_coeffs([c(0.0, 1.0), c(2.0, 1.0)]);
        let scale = c(0.7, -0.4);
        let lhs = bargmann_inner(&p, &f, &g.scale(scale)).unwrap();
        let rhs = scale.conj() * bargmann_inner(&p, &f, &g).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn lowering_is_adjoint_to_multiplication() {
        let p = two_cycle();
        let y = BandOperator::dunkl(&p);
        let f = DensePoly::from_coeffs([c(0.3, 0.1), c(-1.0, 0.4), c(0.0, 2.0), c(1.5, 0.0)]);
        let g = DensePoly::from_coeffs([c(1.0, 1.0), c(0.2, -0.7), c(0.0, 0.3)]);
        let lhs = bargmann_inner(&p, &y.apply(&f), &g).unwrap();
        let rhs = bargmann_inner(&p, &f, &g.shift_up(1)).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn kernel_reproduces_point_values() {
        let p = two_cycle();
        let w = c(0.7, -0.3);
        let f = DensePoly::from_coeffs([c(1.0, 0.5), c(-0.2, 0.0), c(0.0, 1.0), c(0.4, -0.4)]);
        let section = SeriesFunction::kernel_section(&p, w, 40).as_poly();
        let lhs = bargmann_inner(&p, &f, &section).unwrap();
        assert!((lhs - f.eval(w)).norm() < 1e-12);
        // symmetric evaluation agrees with the section coefficients
        let k = kernel_eval(&p, w, c(0.2, 0.1), 40).unwrap();
        assert!((k - section.eval(c(0.2, 0.1))).norm() < 1e-12);
    }

    #[test]
    fn oscillator_spectrum_reference() {
        // two-cycle profile (mu, -mu): eigenvalue on z^n is n + mu + 1/2
        for mu in [0.25, 0.5, 1.3] {
            let p = AlgebraParams::new(2, &[c(mu, 0.0), c(-mu, 0.0)]).unwrap();
            for n in 0..10u64 {
                let want = n as f64 + mu + 0.5;
                assert!((hamiltonian_eigenvalue(&p, n) - c(want, 0.0)).norm() < 1e-13);
            }
            assert!(hamiltonian_residual(&p, 16) < 1e-14);
        }
        let mixed = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        assert!((hamiltonian_eigenvalue(&mixed, 2) - c(2.725, -0.21650635094610966169)).norm() < 1e-14);
        assert!(hamiltonian_residual(&mixed, 16) < 1e-13);
    }
}
