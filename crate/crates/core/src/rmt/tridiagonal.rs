//! `O(N)` samplers of the largest eigenvalue through the tridiagonal models
//! of the Gaussian ensembles.
//!
//! Householder reduction started from `e₁` turns a GUE matrix into a real
//! symmetric tridiagonal matrix with independent entries: diagonal
//! `N(0, 1/2)` and `b_k = χ_{2(N-k)} / 2`. A rank-one source `ε e₁e₁ᵀ` is
//! untouched by the reduction and only shifts the first diagonal entry. For
//! the GOE the diagonal is `N(0, 1)` and `b_k = χ_{N-k} / sqrt2`. These laws
//! are cross-checked against the dense samplers in the tests.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::largest_tridiagonal_eigenvalue;

fn chi<R: Rng + ?Sized>(k: usize, rng: &mut R) -> f64 {
    ChiSquared::new(k as f64).expect("positive degrees of freedom").sample(rng).sqrt()
}

fn check(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Config("matrix size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Tridiagonal model of `GUE + ε₁ e₁e₁ᵀ`: `(diag, off)`.
pub fn gue_rank_one_tridiagonal<R: Rng + ?Sized>(
    n: usize,
    eps1: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check(n)?;
    let sd = 0.5f64.sqrt();
    let mut diag: Vec<f64> = (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect();
    diag[0] += eps1;
    let off = (1..n).map(|k| 0.5 * chi(2 * (n - k), rng)).collect();
    Ok((diag, off))
}

/// Tridiagonal model of the GOE: `(diag, off)`.
pub fn goe_tridiagonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
    check(n)?;
    let diag = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let off = (1..n).map(|k| chi(n - k, rng) / 2f64.sqrt()).collect();
    Ok((diag, off))
}

/// Largest eigenvalue of `GUE + ε₁ e₁e₁ᵀ`.
pub fn largest_gue_rank_one<R: Rng + ?Sized>(n: usize, eps1: f64, rng: &mut R) -> Result<f64> {
    let (d, e) = gue_rank_one_tridiagonal(n, eps1, rng)?;
    Ok(largest_tridiagonal_eigenvalue(&d, &e))
}

/// Largest eigenvalue of a GOE matrix.
pub fn largest_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<f64> {
    let (d, e) = goe_tridiagonal(n, rng)?;
    Ok(largest_tridiagonal_eigenvalue(&d, &e))
}
