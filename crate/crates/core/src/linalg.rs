//! Small dense linear-algebra kernels: symmetric tridiagonal eigensolver
//! (implicit QL), Sturm-sequence bisection, and LU log-determinants.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigen-decomposition of a real symmetric tridiagonal matrix by the implicit
/// QL algorithm with Wilkinson-type shifts.
///
/// `diag` has length n, `off` has length n-1 (`off[i]` couples rows i and i+1).
/// Eigenvalues are returned in ascending order; when `vectors` is true the
/// columns of the returned matrix are the matching orthonormal eigenvectors.
pub fn tridiagonal_eigen(
    diag: &[f64],
    off: &[f64],
    vectors: bool,
) -> Result<(Vec<f64>, Option<DMatrix<f64>>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| DMatrix::zeros(0, 0))));
    }
    if off.len() + 1 != n {
        return Err(Error::Config(format!(
            "tridiagonal: {} diagonal entries need {} off-diagonal entries, got {}",
            n,
            n - 1,
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vectors.then(|| DMatrix::<f64>::identity(n, n));
    ql_implicit(&mut d, &mut e, z.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let z = z.map(|z| DMatrix::from_fn(n, n, |r, c| z[(r, order[c])]));
    Ok((values, z))
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DMatrix<f64>>) -> Result<()> {
    let n = d.len();
    let cap = 50 * n.max(1);
    let mut total = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total += 1;
            if total > cap {
                return Err(Error::Numeric(format!(
                    "implicit QL did not converge within {cap} iterations (n = {n})"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below `x`
/// (Sturm count through the LDLᵀ pivots).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by bisection on the
/// Sturm count, to absolute accuracy about `1e-13` times the Gershgorin radius.
pub fn largest_tridiagonal_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let tol = 1e-14 * (hi.abs().max(lo.abs()).max(1.0));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Determinant of a dense square matrix as `(ln|det|, sign)` via LU with partial
/// pivoting. A singular matrix gives `(-inf, 0.0)`.
pub fn log_det(mut a: DMatrix<f64>) -> Result<(f64, f64)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Config(format!(
            "determinant of a non-square {}x{} matrix",
            n,
            a.ncols()
        )));
    }
    let mut log_abs = 0.0;
    let mut sign = 1.0;
    for k in 0..n {
        let (mut piv, mut best) = (k, a[(k, k)].abs());
        for r in k + 1..n {
            let v = a[(r, k)].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Ok((f64::NEG_INFINITY, 0.0));
        }
        if piv != k {
            a.swap_rows(piv, k);
            sign = -sign;
        }
        let pivot = a[(k, k)];
        if pivot < 0.0 {
            sign = -sign;
        }
        log_abs += pivot.abs().ln();
        for r in k + 1..n {
            let factor = a[(r, k)] / pivot;
            if factor != 0.0 {
                for c in k + 1..n {
                    let v = a[(k, c)];
                    a[(r, c)] -= factor * v;
                }
            }
        }
    }
    Ok((log_abs, sign))
}

/// `det(a)` assembled from [`log_det`].
pub fn det(a: DMatrix<f64>) -> Result<f64> {
    let (log_abs, sign) = log_det(a)?;
    Ok(sign * log_abs.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ql_two_by_two() {
        let (vals, vecs) = tridiagonal_eigen(&[0.0, 0.0], &[1.0], true).unwrap();
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-15);
        let v = vecs.unwrap();
        assert_relative_eq!(v[(0, 1)].abs(), 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn ql_matches_known_spectrum() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2cos(k pi / (n+1)).
        let n = 12;
        let (vals, _) = tridiagonal_eigen(&vec![2.0; n], &vec![-1.0; n - 1], false).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert_relative_eq!(*v, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn ql_eigenvectors_are_orthonormal_and_exact() {
        let d = [1.0, -2.0, 0.5, 3.0, 0.0];
        let e = [0.3, -1.1, 0.7, 2.0];
        let (vals, vecs) = tridiagonal_eigen(&d, &e, true).unwrap();
        let z = vecs.unwrap();
        let t = DMatrix::from_fn(5, 5, |r, c| {
            if r == c {
                d[r]
            } else if r + 1 == c {
                e[r]
            } else if c + 1 == r {
                e[c]
            } else {
                0.0
            }
        });
        let gram = z.transpose() * &z;
        assert!((gram - DMatrix::identity(5, 5)).amax() < 1e-13);
        for k in 0..5 {
            let v = z.column(k);
            let res = &t * v - v * vals[k];
            assert!(res.amax() < 1e-13);
        }
    }

    #[test]
    fn bisection_agrees_with_ql() {
        let d = [0.3, 1.2, -0.4, 2.2, 0.9, -1.0];
        let e = [1.0, 0.2, 0.9, -0.3, 0.6];
        let (vals, _) = tridiagonal_eigen(&d, &e, false).unwrap();
        let top = largest_tridiagonal_eigenvalue(&d, &e);
        assert_relative_eq!(top, *vals.last().unwrap(), epsilon = 1e-12);
        assert_eq!(sturm_count(&d, &e, top + 1e-9), 6);
        assert_eq!(sturm_count(&d, &e, vals[2] + 1e-9), 3);
    }

    #[test]
    fn log_det_sign_and_magnitude() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 3.0]);
        // det = 0*(0-0) - 2*(3-0) + 1*(1-0) = -5
        assert_relative_eq!(det(a).unwrap(), -5.0, epsilon = 1e-14);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(det(singular).unwrap(), 0.0);
    }
}
