//! Moment functionals and the multiple-orthogonality checks.
//!
//! The family of degree-graded polynomials built in [`crate::hermite`] is
//! d-orthogonal with `d = lambda - 1`: there are d functionals
//! `u_0, ..., u_{d-1}`, supported on distinct residue classes mod lambda,
//! and `<u_j, x^k H_n> = 0` for all `k <= (n - j - 1) / d` (integer
//! division, `n > j`), with the pairing at the window edge nonzero.
//!
//! In vector form, the stacked family satisfies a (d+2)-banded recurrence;
//! the pairings `<u_j, x^n Ht_{nd+i}>` assemble into a regular diagonal
//! matrix for this family.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::hermite::HermiteFamily;
use crate::params::AlgebraParams;
use crate::poly::DensePoly;
use crate::report::Report;
use crate::Result;

/// m-th moment of the functional `u_k`: zero off the residue class
/// `m = n lambda + k`, and `[m]! / (n! lambda^n)` on it.
pub fn moment(params: &AlgebraParams, k: usize, m: u64) -> Result<Complex64> {
    let d = params.d();
    if k >= d {
        return Err(Error::IndexOutOfRange {
            what: "moment functional",
            got: k,
            max: d - 1,
        });
    }
    let lambda = params.lambda() as u64;
    if m % lambda != k as u64 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = m / lambda;
    let mut denom = 1.0f64;
    for i in 1..=n {
        denom *= i as f64 * lambda as f64;
    }
    Ok(params.deformed_factorial(m) / denom)
}

/// Moments `(u_k)_0 .. (u_k)_mmax` as a table.
pub fn moment_table(params: &AlgebraParams, k: usize, mmax: u64) -> Result<Vec<Complex64>> {
    (0..=mmax).map(|m| moment(params, k, m)).collect()
}

/// Applies `u_k` to a polynomial, returning the pairing and the absolute
/// term sum used as a cancellation scale.
fn pair_scaled(params: &AlgebraParams, k: usize, f: &DensePoly) -> Result<(Complex64, f64)> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for (m, &c) in f.coeffs().iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = moment(params, k, m as u64)?;
        acc += c * w;
        scale += (c * w).norm();
    }
    Ok((acc, scale.max(1.0)))
}

/// Pairing `<u_k, f>`.
pub fn pair(params: &AlgebraParams, k: usize, f: &DensePoly) -> Result<Complex64> {
    pair_scaled(params, k, f).map(|(v, _)| v)
}

/// Checks the vanishing window and the window-edge regularity for every
/// functional against the monic family, through degree `nmax`.
pub fn verify_d_orthogonality(fam: &HermiteFamily, nmax: usize) -> Result<Report> {
    let params = fam.params();
    let d = params.d();
    let tol = params.tol();
    let mut report = Report::new("d-orthogonality");
    for j in 0..d {
        for n in (j + 1)..=nmax {
            let kmax = (n - j - 1) / d;
            for k in 0..=kmax {
                let shifted = fam.monic(n)?.shift_up(k);
                let (v, scale) = pair_scaled(params, j, &shifted)?;
                report.push(format!("vanish j={j} n={n} k={k}"), v.norm() / scale, tol);
            }
        }
        // the pairing just past the window must not vanish
        for m in 0..=((nmax.saturating_sub(j)) / d) {
            let n = m * d + j;
            if n > nmax {
                break;
            }
            let shifted = fam.monic(n)?.shift_up(m);
            let (v, scale) = pair_scaled(params, j, &shifted)?;
            report.push_bool(format!("regular j={j} m={m}"), v.norm() > tol * scale);
        }
    }
    Ok(report)
}

/// The d-by-d pairing matrix with entries `<u_j, x^n Ht_{nd+i}>`.
pub fn vector_orthogonality_delta(fam: &HermiteFamily, n: usize) -> Result<DMatrix<Complex64>> {
    let params = fam.params();
    let d = params.d();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let shifted = fam.normalized(n * d + i)?.shift_up(n);
            entries.push(pair(params, j, &shifted)?);
        }
    }
    Ok(DMatrix::from_row_slice(d, d, &entries))
}

/// Checks the vector-orthogonality pattern through index `nmax`: pairings
/// with `x^k` vanish for `k < n`, and at `k = n` the matrix is diagonal
/// and regular.
pub fn verify_vector_orthogonality(fam: &HermiteFamily, nmax: usize) -> Result<Report> {
    let params = fam.params();
    let d = params.d();
    let tol = params.tol();
    let mut report = Report::new("vector orthogonality");
    for n in 0..=nmax {
        for i in 0..d {
            for k in 0..n {
                for j in 0..d {
                    let shifted = fam.normalized(n * d + i)?.shift_up(k);
                    let (v, scale) = pair_scaled(params, j, &shifted)?;
                    report.push(
                        format!("zero block n={n} i={i} j={j} k={k}"),
                        v.norm() / scale,
                        tol,
                    );
                }
            }
        }
        let delta = vector_orthogonality_delta(fam, n)?;
        let scale = delta.iter().map(|e| e.norm()).fold(1.0f64, f64::max);
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    report.push_bool(
                        format!("regular diag n={n} j={j}"),
                        delta[(i, j)].norm() > tol * scale,
                    );
                } else {
                    report.push(
                        format!("off-diag n={n} i={i} j={j}"),
                        delta[(i, j)].norm() / scale,
                        tol,
                    );
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::HermiteFamily;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plain_three() -> AlgebraParams {
        AlgebraParams::new(3, &[c(0.0, 0.0); 3]).unwrap()
    }

    #[test]
    fn moment_tables_reference() {
        let p = plain_three();
        let u0 = moment_table(&p, 0, 9).unwrap();
        for (m, want) in [(0, 1.0), (3, 2.0), (6, 40.0), (9, 2240.0)] {
            assert!((u0[m] - c(want, 0.0)).norm() < 1e-12 * want.max(1.0));
        }
        assert_eq!(u0[1], c(0.0, 0.0));
        assert_eq!(u0[4], c(0.0, 0.0));
        let u1 = moment_table(&p, 1, 7).unwrap();
        for (m, want) in [(1, 1.0), (4, 8.0), (7, 280.0)] {
            assert!((u1[m] - c(want, 0.0)).norm() < 1e-12 * want.max(1.0));
        }
        assert_eq!(u1[0], c(0.0, 0.0));
        assert!(matches!(
            moment(&p, 2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn window_edge_pairing_reference() {
        let p = plain_three();
        let fam = HermiteFamily::build(&p, 8, crate::hermite::Route::Recurrence);
        let shifted = fam.monic(4).unwrap().shift_up(2);
        let v = pair(&p, 0, &shifted).unwrap();
        assert!((v - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn vanishing_window_holds_for_mixed_profile() {
        let p = AlgebraParams::new(3, &[c(0.3, 0.0), c(0.1, 0.0), c(-0.4, 0.0)]).unwrap();
        let fam = HermiteFamily::build(&p, 14, crate::hermite::Route::Recurrence);
        let report = verify_d_orthogonality(&fam, 14).unwrap();
        assert!(report.pass, "{:?}", report.failures());
    }

    #[test]
    fn pairing_matrix_reference() {
        let p = plain_three();
        let fam = HermiteFamily::build(&p, 8, crate::hermite::Route::Recurrence);
        let d0 = vector_orthogonality_delta(&fam, 0).unwrap();
        // diag sqrt([0]!), sqrt([1]!) = 1, 1
        assert!((d0[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((d0[(1, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(d0[(0, 1)].norm() < 1e-14);
        assert!(d0[(1, 0)].norm() < 1e-14);
        let d1 = vector_orthogonality_delta(&fam, 1).unwrap();
        assert!((d1[(0, 0)] - c(2.0f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((d1[(1, 1)] - c(6.0f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(d1[(0, 1)].norm() < 1e-13);
        assert!(d1[(1, 0)].norm() < 1e-13);
    }

    #[test]
    fn vector_pattern_holds() {
        let p = plain_three();
        let fam = HermiteFamily::build(&p, 10, crate::hermite::Route::Recurrence);
        let report = verify_vector_orthogonality(&fam, 3).unwrap();
        assert!(report.pass, "{:?}", report.failures());
    }
}
