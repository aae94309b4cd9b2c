//! Hermitian eigensolver: Householder reduction to a complex tridiagonal
//! matrix, a diagonal phase change to make it real, then implicit QL.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::HermitianMatrix;
use crate::error::Result;
use crate::linalg::tridiagonal_eigen;

/// Real tridiagonal form `(diag, off)` of `m` and, if requested, the unitary
/// `U` with `m = U T Uᴴ`.
pub(crate) fn tridiagonalize(
    m: &HermitianMatrix,
    vectors: bool,
) -> (Vec<f64>, Vec<f64>, Option<DMatrix<C64>>) {
    let n = m.n();
    let mut a = m.as_matrix().clone();
    let mut q = vectors.then(|| DMatrix::<C64>::identity(n, n));
    let zero = C64::new(0.0, 0.0);
    let mut sub = vec![zero; n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<C64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            sub[k] = zero;
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            sub[k] = x[0];
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // trailing block B <- B - v wᴴ - w vᴴ with w = 2(p - (vᴴp) v), p = B v
        let off = k + 1;
        let mut p = vec![zero; len];
        for j in 0..len {
            let vj = v[j];
            for i in 0..len {
                p[i] += a[(off + i, off + j)] * vj;
            }
        }
        let kappa: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| 2.0 * (pi - kappa * vi)).collect();
        for j in 0..len {
            let (vj, wj) = (v[j].conj(), w[j].conj());
            for i in 0..len {
                a[(off + i, off + j)] -= v[i] * wj + w[i] * vj;
            }
        }
        for i in 0..len {
            a[(off + i, k)] = zero;
            a[(k, off + i)] = zero;
        }
        a[(off, k)] = alpha;
        a[(k, off)] = alpha.conj();
        sub[k] = alpha;

        if let Some(q) = q.as_mut() {
            // Q <- Q (I - 2 v vᴴ) on columns off..n
            for r in 0..n {
                let s: C64 = (0..len).map(|i| q[(r, off + i)] * v[i]).sum();
                for i in 0..len {
                    q[(r, off + i)] -= 2.0 * s * v[i].conj();
                }
            }
        }
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1, n - 2)];
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let off: Vec<f64> = sub.iter().map(|z| z.norm()).collect();
    // phases δ with δ_{k+1} = δ_k e_k/|e_k| make the subdiagonal real
    let q = q.map(|mut q| {
        let mut delta = C64::new(1.0, 0.0);
        for k in 0..n {
            if k > 0 && off[k - 1] > 0.0 {
                delta *= sub[k - 1] / off[k - 1];
            }
            for r in 0..n {
                q[(r, k)] *= delta;
            }
        }
        q
    });
    (diag, off, q)
}

/// All eigenvalues of a Hermitian matrix in ascending order.
pub fn eigs_hermitian(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let (d, e, _) = tridiagonalize(m, false);
    Ok(tridiagonal_eigen(&d, &e, false)?.0)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors as columns.
pub fn eigh_hermitian(m: &HermitianMatrix) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let (d, e, q) = tridiagonalize(m, true);
    let (vals, z) = tridiagonal_eigen(&d, &e, true)?;
    let z = z.expect("vectors requested").map(|x| C64::new(x, 0.0));
    Ok((vals, q.expect("vectors requested") * z))
}

/// Eigenvalues of a real symmetric matrix in ascending order.
pub fn eigs_symmetric(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    eigs_hermitian(&HermitianMatrix::from_real(m)?)
}
