//! Truncated number-basis matrices for the deformed ladder algebra and
//! residual checks of its defining and derived relations.
//!
//! A truncation to `dim` basis states clips the top-right corner of every
//! product, so each identity is compared on an interior window whose margin
//! covers the bandwidth of the operators involved.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::params::AlgebraParams;
use crate::report::Report;
use crate::Result;

/// Ladder, number, grading and projector matrices in the number basis.
pub struct FockMatrices {
    params: AlgebraParams,
    dim: usize,
    a_minus: DMatrix<Complex64>,
    a_plus: DMatrix<Complex64>,
    number: DMatrix<Complex64>,
    grading: DMatrix<Complex64>,
    projectors: Vec<DMatrix<Complex64>>,
}

fn band(dim: usize, shift: i64, f: impl Fn(u64) -> Complex64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = col as i64 + shift;
        if (0..dim as i64).contains(&row) {
            m[(row as usize, col)] = f(col as u64);
        }
    }
    m
}

impl FockMatrices {
    /// Builds the matrices; the ladder entries are square roots of the
    /// deformed integers, so the positivity flag is required.
    pub fn build(params: &AlgebraParams, dim: usize) -> Result<Self> {
        if !params.flags().positive {
            return Err(Error::PositivityRequired("number-basis matrices"));
        }
        let lambda = params.lambda();
        if dim < 2 * lambda {
            return Err(Error::DimensionTooSmall {
                got: dim,
                min: 2 * lambda,
            });
        }
        let root = |n: u64| Complex64::new(params.deformed_number(n).re.sqrt(), 0.0);
        let a_minus = band(dim, -1, root);
        let a_plus = band(dim, 1, |n| root(n + 1));
        let number = band(dim, 0, |n| Complex64::new(n as f64, 0.0));
        let grading = band(dim, 0, |n| params.epsilon_pow(n as i64));
        let projectors = (0..lambda)
            .map(|i| {
                // (1/lambda) sum_j eps^{-i j} s^j, evaluated entrywise with
                // exact phase indices
                band(dim, 0, |n| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..lambda as i64 {
                        acc += params.epsilon_pow(j * (n as i64 - i as i64));
                    }
                    acc / lambda as f64
                })
            })
            .collect();
        Ok(FockMatrices {
            params: params.clone(),
            dim,
            a_minus,
            a_plus,
            number,
            grading,
            projectors,
        })
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a_minus(&self) -> &DMatrix<Complex64> {
        &self.a_minus
    }

    pub fn a_plus(&self) -> &DMatrix<Complex64> {
        &self.a_plus
    }

    pub fn number(&self) -> &DMatrix<Complex64> {
        &self.number
    }

    /// The grading involution-like generator with `s^lambda = 1`.
    pub fn grading(&self) -> &DMatrix<Complex64> {
        &self.grading
    }

    pub fn projector(&self, i: usize) -> Result<&DMatrix<Complex64>> {
        self.projectors.get(i).ok_or(Error::IndexOutOfRange {
            what: "projector",
            got: i,
            max: self.params.lambda() - 1,
        })
    }
}

/// Largest entry magnitude over the square window that excludes the last
/// `margin` rows and columns.
fn interior_max(m: &DMatrix<Complex64>, margin: usize) -> f64 {
    let n = m.nrows().saturating_sub(margin);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

fn resid(lhs: &DMatrix<Complex64>, rhs: &DMatrix<Complex64>, margin: usize) -> f64 {
    interior_max(&(lhs - rhs), margin) / interior_max(rhs, margin).max(1.0)
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// Residual checks of the defining relations and the projector calculus.
pub fn verify_algebra(fock: &FockMatrices) -> Report {
    let p = fock.params();
    let lambda = p.lambda();
    let dim = fock.dim();
    let tol = p.tol();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut report = Report::new("ladder algebra");

    // powers of the grading generator
    let mut s_pows = vec![id.clone()];
    for _ in 1..=lambda {
        s_pows.push(s_pows.last().unwrap() * fock.grading());
    }

    let comm = commutator(fock.a_minus(), fock.a_plus());
    let mut rhs = id.clone();
    for i in 1..lambda {
        rhs += &s_pows[i] * p.beta(i);
    }
    report.push("ladder commutator, grading form", resid(&comm, &rhs, lambda), tol);

    let mut rhs = id.clone();
    for j in 0..lambda {
        rhs += fock.projector(j).unwrap() * p.beta_hat(j);
    }
    report.push("ladder commutator, projector form", resid(&comm, &rhs, lambda), tol);

    report.push(
        "number lowers",
        resid(&commutator(fock.number(), fock.a_minus()), &(-fock.a_minus()), lambda),
        tol,
    );
    report.push(
        "number raises",
        resid(&commutator(fock.number(), fock.a_plus()), fock.a_plus(), lambda),
        tol,
    );

    let eps = p.epsilon_pow(1);
    report.push(
        "grading conjugates lowering",
        resid(
            &(fock.a_minus() * fock.grading()),
            &((fock.grading() * fock.a_minus()) * eps),
            lambda,
        ),
        tol,
    );
    report.push(
        "grading conjugates raising",
        resid(
            &(fock.a_plus() * fock.grading()),
            &((fock.grading() * fock.a_plus()) * p.epsilon_pow(-1)),
            lambda,
        ),
        tol,
    );

    report.push("grading has full order", resid(&s_pows[lambda], &id, lambda), tol);

    let mut recon = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..lambda {
        recon += fock.projector(i).unwrap() * p.epsilon_pow(i as i64);
    }
    report.push("grading from projectors", resid(&recon, fock.grading(), lambda), tol);

    let mut total = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..lambda {
        let pi = fock.projector(i).unwrap();
        total += pi;
        report.push(
            format!("projector idempotent i={i}"),
            resid(&(pi * pi), pi, lambda),
            tol,
        );
        let j = (i + 1) % lambda;
        report.push(
            format!("disjoint projectors i={i}"),
            interior_max(&(pi * fock.projector(j).unwrap()), lambda),
            tol,
        );
        report.push(
            format!("raising shifts residue class i={i}"),
            resid(
                &(fock.a_plus() * pi),
                &(fock.projector(j).unwrap() * fock.a_plus()),
                lambda,
            ),
            tol,
        );
        let k = (i + lambda - 1) % lambda;
        report.push(
            format!("lowering shifts residue class i={i}"),
            resid(
                &(fock.a_minus() * pi),
                &(fock.projector(k).unwrap() * fock.a_minus()),
                lambda,
            ),
            tol,
        );
    }
    report.push("projectors resolve identity", resid(&total, &id, lambda), tol);

    // a_+ a_- carries the deformed number operator
    let mut rhs = fock.number().clone();
    for i in 0..lambda {
        rhs += fock.projector(i).unwrap() * p.nu_hat()[i];
    }
    report.push(
        "deformed number operator",
        resid(&(fock.a_plus() * fock.a_minus()), &rhs, lambda),
        tol,
    );

    // the commutator matrix is self-adjoint when the profile is hermitian
    if p.flags().hermitian {
        report.push(
            "commutator self-adjoint",
            resid(&comm.adjoint(), &comm, lambda),
            tol,
        );
    }

    report
}

/// Residual checks of the power-commutation identities
/// `[a_-^n, a_+] = (n + sum_i beta_i g_i(n) s^i) a_-^{n-1}` and
/// `[a_-, a_+^n] = a_+^{n-1} (n + sum_i beta_i g_i(n) s^i)`, with
/// `g_i(n)` the length-n geometric sum of `eps^i`, together with the
/// graded relations `[N, a_{-+}^n] = -+ n a_{-+}^n`.
pub fn verify_power_commutators(fock: &FockMatrices, nmax: usize) -> Report {
    let p = fock.params();
    let lambda = p.lambda();
    let dim = fock.dim();
    let tol = p.tol();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut report = Report::new("power commutators");

    let mut s_pows = vec![id.clone()];
    for _ in 1..lambda {
        s_pows.push(s_pows.last().unwrap() * fock.grading());
    }

    let mut minus_pow = id.clone();
    let mut plus_pow = id.clone();
    for n in 1..=nmax {
        let margin = lambda.max(n + 1);
        let prev_minus = minus_pow.clone();
        let prev_plus = plus_pow.clone();
        minus_pow = &minus_pow * fock.a_minus();
        plus_pow = &plus_pow * fock.a_plus();

        let mut factor = &id * Complex64::new(n as f64, 0.0);
        for i in 1..lambda {
            let weight = p.beta(i) * p.epsilon_geom_sum(i as i64, n as u64);
            factor += &s_pows[i] * weight;
        }

        report.push(
            format!("lowering power vs raising n={n}"),
            resid(
                &commutator(&minus_pow, fock.a_plus()),
                &(&factor * &prev_minus),
                margin,
            ),
            tol,
        );
        report.push(
            format!("lowering vs raising power n={n}"),
            resid(
                &commutator(fock.a_minus(), &plus_pow),
                &(&prev_plus * &factor),
                margin,
            ),
            tol,
        );
        report.push(
            format!("number grades lowering power n={n}"),
            resid(
                &commutator(fock.number(), &minus_pow),
                &(&minus_pow * Complex64::new(-(n as f64), 0.0)),
                margin,
            ),
            tol,
        );
        report.push(
            format!("number grades raising power n={n}"),
            resid(
                &commutator(fock.number(), &plus_pow),
                &(&plus_pow * Complex64::new(n as f64, 0.0)),
                margin,
            ),
            tol,
        );
        if n % lambda == 0 {
            // full-period powers commute up to the plain integer factor
            report.push(
                format!("full-period reduction n={n}"),
                resid(
                    &commutator(&minus_pow, fock.a_plus()),
                    &(&prev_minus * Complex64::new(n as f64, 0.0)),
                    margin,
                ),
                tol,
            );
        }
    }
    report
}
