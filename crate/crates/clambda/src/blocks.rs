//! Band and block matrices for the normalized family: the multiplication
//! and lowering operators in the graded basis, their block form for the
//! stacked vectors `(Ht_{nd}, ..., Ht_{nd+d-1})`, and spectral checks on
//! leading truncations.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::hermite::{HermiteFamily, Route};
use crate::ops::BandOperator;
use crate::params::AlgebraParams;
use crate::poly::{rel_gap, DensePoly};
use crate::report::Report;
use crate::Result;

/// One stage of block coefficients for the vector recurrences.
///
/// With `d = lambda - 1`: `a` carries the single corner coupling to the
/// next block, `b` the in-block superdiagonal, `c` the diagonal couplings
/// to the previous block, `r` the grading phases.
pub struct BlockCoefficients {
    pub a: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
    pub c: DMatrix<Complex64>,
    pub r: DMatrix<Complex64>,
}

fn require_positive(params: &AlgebraParams, what: &'static str) -> Result<()> {
    if !params.flags().positive {
        return Err(Error::PositivityRequired(what));
    }
    Ok(())
}

fn root_number(params: &AlgebraParams, m: u64) -> Complex64 {
    Complex64::new(params.deformed_number(m).re.sqrt(), 0.0)
}

/// `sqrt([m]! / [m - lambda + 1]!)`, the normalized coupling across one
/// full period; zero for `m < lambda - 1`.
fn root_gamma(params: &AlgebraParams, m: u64) -> Complex64 {
    if m < params.lambda() as u64 - 1 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(params.recurrence_gamma(m).re.sqrt(), 0.0)
}

/// Block coefficients at stage `n`.
pub fn block_coefficients(params: &AlgebraParams, n: usize) -> Result<BlockCoefficients> {
    require_positive(params, "block coefficients")?;
    let d = params.d();
    let base = (n * d) as u64;
    let mut a = DMatrix::zeros(d, d);
    a[(d - 1, 0)] = root_number(params, base + d as u64);
    let mut b = DMatrix::zeros(d, d);
    for j in 1..d {
        b[(j - 1, j)] = root_number(params, base + j as u64);
    }
    let mut c = DMatrix::zeros(d, d);
    if n > 0 {
        for j in 0..d {
            c[(j, j)] = root_gamma(params, base + j as u64);
        }
    }
    let mut r = DMatrix::zeros(d, d);
    for j in 0..d {
        r[(j, j)] = params.epsilon_pow((base + j as u64) as i64);
    }
    Ok(BlockCoefficients { a, b, c, r })
}

/// Assembled block matrices for `nblocks` stages.
pub struct BlockSystem {
    params: AlgebraParams,
    nblocks: usize,
    x: DMatrix<Complex64>,
    y: DMatrix<Complex64>,
}

fn set_block(big: &mut DMatrix<Complex64>, d: usize, bi: usize, bj: usize, small: &DMatrix<Complex64>) {
    for i in 0..d {
        for j in 0..d {
            big[(bi * d + i, bj * d + j)] = small[(i, j)];
        }
    }
}

impl BlockSystem {
    pub fn build(params: &AlgebraParams, nblocks: usize) -> Result<Self> {
        require_positive(params, "block system")?;
        if nblocks < 2 {
            return Err(Error::DimensionTooSmall {
                got: nblocks,
                min: 2,
            });
        }
        let d = params.d();
        let dim = nblocks * d;
        let coeffs: Vec<BlockCoefficients> = (0..nblocks)
            .map(|n| block_coefficients(params, n))
            .collect::<Result<_>>()?;
        let mut x = DMatrix::zeros(dim, dim);
        let mut y = DMatrix::zeros(dim, dim);
        for n in 0..nblocks {
            set_block(&mut x, d, n, n, &coeffs[n].b);
            set_block(&mut y, d, n, n, &coeffs[n].b.transpose());
            if n + 1 < nblocks {
                set_block(&mut x, d, n + 1, n, &coeffs[n].a);
                set_block(&mut x, d, n, n + 1, &coeffs[n + 1].c);
                set_block(&mut y, d, n, n + 1, &coeffs[n].a.transpose());
            }
        }
        Ok(BlockSystem {
            params: params.clone(),
            nblocks,
            x,
            y,
        })
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn nblocks(&self) -> usize {
        self.nblocks
    }

    pub fn dim(&self) -> usize {
        self.nblocks * self.params.d()
    }

    pub fn x(&self) -> &DMatrix<Complex64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<Complex64> {
        &self.y
    }
}

/// Multiplication operator on the normalized basis, unblocked:
/// entries `sqrt([m+1])` one below the diagonal and the period coupling
/// `sqrt(gamma_m)` a full period above.
pub fn flat_x(params: &AlgebraParams, dim: usize) -> Result<DMatrix<Complex64>> {
    require_positive(params, "multiplication matrix")?;
    let d = params.d();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        if col + 1 < dim {
            m[(col + 1, col)] = root_number(params, col as u64 + 1);
        }
        if col >= d {
            m[(col - d, col)] = root_gamma(params, col as u64);
        }
    }
    Ok(m)
}

/// Lowering operator on the normalized basis, unblocked.
pub fn flat_y(params: &AlgebraParams, dim: usize) -> Result<DMatrix<Complex64>> {
    require_positive(params, "lowering matrix")?;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 1..dim {
        m[(col - 1, col)] = root_number(params, col as u64);
    }
    Ok(m)
}

/// Deviation of the assembled system from `X = Y^T + superdiag(C)`;
/// exactly zero when coefficients are consistent.
pub fn structural_invariant_residual(bs: &BlockSystem) -> Result<f64> {
    let d = bs.params().d();
    let mut expected = bs.y().transpose();
    for n in 1..bs.nblocks() {
        let c = block_coefficients(bs.params(), n)?.c;
        for i in 0..d {
            for j in 0..d {
                expected[((n - 1) * d + i, n * d + j)] += c[(i, j)];
            }
        }
    }
    Ok((bs.x() - expected).iter().map(|e| e.norm()).fold(0.0, f64::max))
}

/// Checks the three vector recurrences against the actually constructed
/// normalized polynomials, at the given sample points:
/// `x Hv_n = A_n Hv_{n+1} + B_n Hv_n + C_n Hv_{n-1}`,
/// `Y Hv_n = A_{n-1}^T Hv_{n-1} + B_n^T Hv_n`, and
/// `S Hv_n = R_n Hv_n`.
pub fn verify_vector_recurrences(
    params: &AlgebraParams,
    nblocks: usize,
    samples: &[Complex64],
) -> Result<Report> {
    require_positive(params, "vector recurrences")?;
    let d = params.d();
    let tol = params.tol();
    let fam = HermiteFamily::build(params, nblocks * d - 1, Route::Recurrence);
    let coeffs: Vec<BlockCoefficients> = (0..nblocks)
        .map(|n| block_coefficients(params, n))
        .collect::<Result<_>>()?;
    let dunkl = BandOperator::dunkl(params);
    let eps = params.epsilon_pow(1);
    let mut report = Report::new("vector recurrences");

    let value = |idx: usize, z: Complex64| -> Result<Complex64> {
        Ok(fam.normalized(idx)?.eval(z))
    };

    for n in 0..=nblocks - 2 {
        for j in 0..d {
            let idx = n * d + j;
            let lowered = dunkl.apply(fam.normalized(idx)?);
            for (zi, &z) in samples.iter().enumerate() {
                let here = value(idx, z)?;

                let mut rhs = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    rhs += coeffs[n].a[(j, k)] * value((n + 1) * d + k, z)?;
                    rhs += coeffs[n].b[(j, k)] * value(n * d + k, z)?;
                    if n > 0 {
                        rhs += coeffs[n].c[(j, k)] * value((n - 1) * d + k, z)?;
                    }
                }
                let lhs = z * here;
                report.push(
                    format!("multiplication n={n} j={j} z{zi}"),
                    rel_gap(lhs, rhs),
                    tol,
                );

                let mut rhs = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    if n > 0 {
                        rhs += coeffs[n - 1].a[(k, j)] * value((n - 1) * d + k, z)?;
                    }
                    rhs += coeffs[n].b[(k, j)] * value(n * d + k, z)?;
                }
                report.push(
                    format!("lowering n={n} j={j} z{zi}"),
                    rel_gap(lowered.eval(z), rhs),
                    tol,
                );

                report.push(
                    format!("grading n={n} j={j} z{zi}"),
                    rel_gap(
                        fam.normalized(idx)?.eval(eps * z),
                        coeffs[n].r[(j, j)] * here,
                    ),
                    tol,
                );
            }
        }
    }
    Ok(report)
}

/// Checks that the unblocked commutator `[Y, X]` is diagonal on the
/// interior with entries `1 + beta_hat_{m mod lambda}`.
pub fn verify_flat_commutator(params: &AlgebraParams, dim: usize) -> Result<Report> {
    let lambda = params.lambda();
    if dim < 2 * lambda {
        return Err(Error::DimensionTooSmall {
            got: dim,
            min: 2 * lambda,
        });
    }
    let tol = params.tol();
    let x = flat_x(params, dim)?;
    let y = flat_y(params, dim)?;
    let k = &y * &x - &x * &y;
    let mut report = Report::new("flat commutator");
    let interior = dim - lambda;
    let mut off = 0.0f64;
    for i in 0..interior {
        for j in 0..interior {
            if i != j {
                off = off.max(k[(i, j)].norm());
            }
        }
    }
    report.push("off-diagonal vanishes", off, tol);
    for m in 0..interior {
        let want = Complex64::new(1.0, 0.0) + params.beta_hat(m);
        report.push(format!("diagonal m={m}"), rel_gap(k[(m, m)], want), tol);
    }
    Ok(report)
}

fn eval_with_scale(p: &DensePoly, z: Complex64) -> (Complex64, f64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut pw = Complex64::new(1.0, 0.0);
    for &c in p.coeffs() {
        value += c * pw;
        scale += (c * pw).norm();
        pw *= z;
    }
    (value, scale.max(1.0))
}

/// Eigenvalues of the leading `m x m` truncation of the flat
/// multiplication matrix. Requires a positivity-compliant profile so the
/// matrix is real; these are the zeros of the degree-m polynomial.
pub fn truncation_eigenvalues(params: &AlgebraParams, m: usize) -> Result<Vec<Complex64>> {
    require_positive(params, "truncation eigenvalues")?;
    let x = flat_x(params, m)?;
    let xr = DMatrix::<f64>::from_fn(m, m, |i, j| x[(i, j)].re);
    crate::eig::real_hessenberg_eigenvalues(xr)
}

/// Spectral checks on the leading `m x m` truncation of the
/// multiplication matrix: every eigenvalue is a zero of the degree-m
/// polynomial, and the eigenvalue multiset is invariant under rotation
/// by `eps` (the zero set inherits the degree grading).
pub fn verify_spectrum(params: &AlgebraParams, m: usize) -> Result<Report> {
    require_positive(params, "spectrum")?;
    let tol = params.tol().max(1e-10) * 100.0;
    let eigs = truncation_eigenvalues(params, m)?;
    let fam = HermiteFamily::build(params, m, Route::Recurrence);
    let target = fam.monic(m)?;
    let mut report = Report::new("truncation spectrum");
    let spread = eigs.iter().map(|e| e.norm()).fold(1.0f64, f64::max);
    for (i, &mu) in eigs.iter().enumerate() {
        let (v, scale) = eval_with_scale(target, mu);
        report.push(format!("eigenvalue {i} is a zero"), v.norm() / scale, tol);
    }
    let eps = params.epsilon_pow(1);
    let mut worst = 0.0f64;
    for &mu in eigs.iter() {
        let rotated = eps * mu;
        let nearest = eigs
            .iter()
            .map(|&nu| (rotated - nu).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    report.push("rotation invariance", worst / spread, tol);
    Ok(report)
}
