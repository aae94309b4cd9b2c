//! Gaussian random matrices and their largest eigenvalues.
//!
//! Variance conventions (these fix every edge constant):
//!
//! * GUE, density `∝ e^{-tr M²}`: diagonal `N(0, 1/2)`, off-diagonal real and
//!   imaginary parts `N(0, 1/4)`. Spectrum edge `sqrt(2N)`.
//! * GOE, density `∝ e^{-tr M²/2}`: diagonal `N(0, 1)`, off-diagonal `N(0, 1/2)`.
//!   Same edge `sqrt(2N)` and the same soft-edge scaling.
//! * Static source: `H + V`, `H` from the GUE above, `V = diag(ε)`.
//! * Dyson chain: `H₁ = V/2 + GUE` (the density `∝ e^{-tr H² + tr V H}`), then
//!   an Ornstein–Uhlenbeck step `H_{j+1} = e^{-Δ} H_j + sqrt(1 - e^{-2Δ}) G`.
//!
//! The dense samplers are the reference. [`tridiagonal`] has equivalent
//! `O(N)` samplers of the largest eigenvalue for rank-one sources and GOE,
//! used for large Monte Carlo runs.

mod eigen;
pub mod tridiagonal;

pub use eigen::{eigh_hermitian, eigs_hermitian, eigs_symmetric};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure_finite, Error, Result};
use crate::kernels::{gaussian_width, SourceSpec};

/// Dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
}

impl HermitianMatrix {
    /// Checks squareness, finiteness and Hermitian symmetry (to 1e-12 relative).
    pub fn new(data: DMatrix<C64>) -> Result<Self> {
        let n = data.nrows();
        if data.ncols() != n || n == 0 {
            return Err(Error::Config(format!(
                "Hermitian matrix must be square and nonempty, got {}x{}",
                n,
                data.ncols()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        let scale = data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        for i in 0..n {
            for j in 0..=i {
                if (data[(i, j)] - data[(j, i)].conj()).norm() > 1e-12 * scale {
                    return Err(Error::Domain(format!("matrix is not Hermitian at ({i},{j})")));
                }
            }
        }
        Ok(Self { data })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| C64::new(x, 0.0)))
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.data[(i, i)].re).sum()
    }

    /// `tr M² = Σ |m_ij|²`.
    pub fn trace_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest eigenvalue.
    pub fn largest_eigenvalue(&self) -> Result<f64> {
        Ok(*eigs_hermitian(self)?.last().expect("nonempty"))
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R, sd: f64) -> f64 {
    sd * rng.sample::<f64, _>(StandardNormal)
}

/// GUE matrix with density `∝ e^{-tr M²}`, entries scaled by `sd`
/// relative to that law.
fn gue_scaled<R: Rng + ?Sized>(n: usize, sd: f64, rng: &mut R) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(normal(rng, sd * 0.5f64.sqrt()), 0.0);
        for j in 0..i {
            let z = C64::new(normal(rng, 0.5 * sd), normal(rng, 0.5 * sd));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Config("matrix size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// GUE sample, density `∝ e^{-tr M²}`.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix> {
    check_size(n)?;
    Ok(HermitianMatrix { data: gue_scaled(n, 1.0, rng) })
}

/// GOE sample, density `∝ e^{-tr M²/2}`.
pub fn sample_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    check_size(n)?;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = normal(rng, 1.0);
        for j in 0..i {
            let x = normal(rng, 0.5f64.sqrt());
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    Ok(m)
}

fn check_source(n: usize, src: &SourceSpec) -> Result<()> {
    check_size(n)?;
    if src.n() != n {
        return Err(Error::Config(format!(
            "source has {} entries, matrix size is {n}",
            src.n()
        )));
    }
    Ok(())
}

/// `H + V` with `H` from [`sample_gue`] and `V = diag(ε)`.
pub fn sample_source_matrix<R: Rng + ?Sized>(
    n: usize,
    src: &SourceSpec,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    check_source(n, src)?;
    let mut m = gue_scaled(n, 1.0, rng);
    for (i, e) in src.epsilons().iter().enumerate() {
        m[(i, i)].re += e;
    }
    Ok(HermitianMatrix { data: m })
}

/// Increasing time grid starting at `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::Config(format!("time grid must start at 0: {times:?}")));
        }
        if times.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::Config(format!("time grid must be strictly increasing: {times:?}")));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Matrices `H_1, …, H_M` of the Dyson chain on `grid`.
pub fn sample_dyson_chain_matrices<R: Rng + ?Sized>(
    n: usize,
    src: &SourceSpec,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<Vec<HermitianMatrix>> {
    check_source(n, src)?;
    let mut h = gue_scaled(n, 1.0, rng);
    for (i, e) in src.epsilons().iter().enumerate() {
        h[(i, i)].re += 0.5 * e;
    }
    let mut out = Vec::with_capacity(grid.len());
    out.push(HermitianMatrix { data: h.clone() });
    for w in grid.times().windows(2) {
        let d = w[1] - w[0];
        let noise = gue_scaled(n, (-(-2.0 * d).exp_m1()).sqrt(), rng);
        h = h * C64::new((-d).exp(), 0.0) + noise;
        out.push(HermitianMatrix { data: h.clone() });
    }
    Ok(out)
}

/// Spectra (ascending) of the Dyson chain at every grid time.
pub fn sample_dyson_chain<R: Rng + ?Sized>(
    n: usize,
    src: &SourceSpec,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    sample_dyson_chain_matrices(n, src, grid, rng)?
        .iter()
        .map(eigs_hermitian)
        .collect()
}

/// Soft-edge scaling `X = (λ - sqrt(2N)) sqrt2 N^{1/6}`.
pub fn edge_scale(lambda1: f64, n: usize) -> f64 {
    let nf = n as f64;
    (lambda1 - (2.0 * nf).sqrt()) * 2f64.sqrt() * nf.powf(1.0 / 6.0)
}

/// Inverse of [`edge_scale`].
pub fn edge_unscale(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    (2.0 * nf).sqrt() + x / (2f64.sqrt() * nf.powf(1.0 / 6.0))
}

/// `A_G = (Λ + 1/Λ)/sqrt2`, the centre of the Gaussian regime in units of `sqrt N`.
pub fn gaussian_center(lambda: f64) -> Result<f64> {
    gaussian_width(lambda)?;
    Ok((lambda + 1.0 / lambda) / 2f64.sqrt())
}

/// Gaussian-regime scaling `(λ - A_G sqrt N) / B_G` for `Λ > 1`.
pub fn edge_scale_gaussian(lambda1: f64, n: usize, lambda: f64) -> Result<f64> {
    ensure_finite("eigenvalue", lambda1)?;
    let a = gaussian_center(lambda)?;
    let b = gaussian_width(lambda)?;
    Ok((lambda1 - a * (n as f64).sqrt()) / b)
}
