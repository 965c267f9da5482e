//! Eigenvalues of real upper-Hessenberg matrices by the implicit
//! double-shift QR iteration with exceptional shifts.
//!
//! The multiplication operator truncations this crate produces are upper
//! Hessenberg with zero diagonal, a structure on which shift-free QR
//! iterations are known to cycle; the periodic ad-hoc shift breaks the
//! cycle. Classical HQR scheme (EISPACK lineage), eigenvalues only.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

pub(crate) fn real_hessenberg_eigenvalues(mut a: DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(out);
    }
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            a[(i, j)] = 0.0;
        }
    }
    let mut anorm = 0.0f64;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(out);
    }

    let eps = f64::EPSILON;
    let mut nn = n as i64 - 1;
    let mut t = 0.0f64;
    while nn >= 0 {
        let mut its = 0u32;
        loop {
            // deflation scan for a negligible subdiagonal entry
            let mut l = nn;
            while l >= 1 {
                let (lu, _) = (l as usize, ());
                let mut s = a[(lu - 1, lu - 1)].abs() + a[(lu, lu)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(lu, lu - 1)].abs() <= eps * s {
                    a[(lu, lu - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let nu = nn as usize;
            let mut x = a[(nu, nu)];
            if l == nn {
                out[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[(nu - 1, nu - 1)];
            let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + if p >= 0.0 { z } else { -z };
                    let first = x + z;
                    out[nu - 1] = Complex64::new(first, 0.0);
                    out[nu] = Complex64::new(if z != 0.0 { x - w / z } else { first }, 0.0);
                } else {
                    out[nu - 1] = Complex64::new(x + p, z);
                    out[nu] = Complex64::new(x + p, -z);
                }
                nn -= 2;
                break;
            }

            if its >= 100 {
                return Err(Error::EigenvalueIteration { size: n });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift: displace the diagonal and restart the
                // shift polynomial from the subdiagonal magnitudes
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                y = 0.75 * s;
                x = y;
                w = -0.4375 * s * s;
            }
            its += 1;

            // find two consecutive small subdiagonals to start the sweep
            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
            while m >= l {
                let mu = m as usize;
                let z = a[(mu, mu)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(mu + 1, mu)] + a[(mu, mu + 1)];
                q = a[(mu + 1, mu + 1)] - z - rr - ss;
                r = a[(mu + 2, mu + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(mu, mu - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(mu - 1, mu - 1)].abs() + z.abs() + a[(mu + 1, mu + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                let iu = i as usize;
                a[(iu, iu - 2)] = 0.0;
                if i != m + 2 {
                    a[(iu, iu - 3)] = 0.0;
                }
            }

            // chase the bulge
            for k in m..=(nn - 1) {
                let ku = k as usize;
                if k != m {
                    p = a[(ku, ku - 1)];
                    q = a[(ku + 1, ku - 1)];
                    r = if k != nn - 1 { a[(ku + 2, ku - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let mut s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[(ku, ku - 1)] = -a[(ku, ku - 1)];
                    }
                } else {
                    a[(ku, ku - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in ku..=nu {
                    let mut pp = a[(ku, j)] + q * a[(ku + 1, j)];
                    if k != nn - 1 {
                        pp += r * a[(ku + 2, j)];
                        a[(ku + 2, j)] -= pp * z;
                    }
                    a[(ku + 1, j)] -= pp * y;
                    a[(ku, j)] -= pp * x;
                }
                let mmin = if nn < k + 3 { nu } else { ku + 3 };
                for i in (l as usize)..=mmin {
                    let mut pp = x * a[(i, ku)] + y * a[(i, ku + 1)];
                    if k != nn - 1 {
                        pp += z * a[(i, ku + 2)];
                        a[(i, ku + 2)] -= pp * r;
                    }
                    a[(i, ku + 1)] -= pp * q;
                    a[(i, ku)] -= pp;
                }
            }
        }
    }
    Ok(out)
}
