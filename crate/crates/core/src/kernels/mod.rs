//! Correlation kernels: limiting Airy-type kernels, finite-N double-contour
//! kernels of the source ensembles, multiple Hermite functions, and the
//! [`ExtendedKernel`] wrapper used by the Fredholm evaluators.

mod contour;
mod extended;
mod finite;
mod hermite;
mod limit;

pub use contour::{ContourOptions, LineSide};
pub use extended::{EdgeScaling, ExtendedKernel, KernelVariant};
pub use finite::{dynamical_block, k_finite_dyn, k_finite_static, phi_ou, static_block};
pub use hermite::{mh_first, mh_second};
pub use limit::{
    gaussian_width, k12, k2, k2_ext, k_gauss_limit, k_transition, rank_one_factor,
};

use crate::error::{Error, Result};

/// Deterministic source `V = diag(ε_1, …, ε_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    epsilons: Vec<f64>,
}

impl SourceSpec {
    pub fn new(epsilons: Vec<f64>) -> Result<Self> {
        if epsilons.is_empty() {
            return Err(Error::Config("source needs N >= 1 entries".into()));
        }
        if let Some(e) = epsilons.iter().find(|e| !e.is_finite()) {
            return Err(Error::Domain(format!("source entry {e} is not finite")));
        }
        Ok(Self { epsilons })
    }

    /// `V = 0`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    /// Rank one, `ε_1 = Λ sqrt(N/2)`: the static edge family (GUE for `Λ < 1`,
    /// GOE² at `Λ = 1`, Gaussian for `Λ > 1`).
    pub fn from_lambda(n: usize, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("source needs N >= 1".into()));
        }
        let mut eps = vec![0.0; n];
        eps[0] = lambda * (n as f64 / 2.0).sqrt();
        Self::new(eps)
    }

    /// Rank one, `ε_1 = sqrt(2N) (1 - ω N^{-1/3})`: the dynamical edge family.
    pub fn from_omega(n: usize, omega: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("source needs N >= 1".into()));
        }
        let nf = n as f64;
        let mut eps = vec![0.0; n];
        eps[0] = (2.0 * nf).sqrt() * (1.0 - omega * nf.powf(-1.0 / 3.0));
        Self::new(eps)
    }

    pub fn n(&self) -> usize {
        self.epsilons.len()
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }
}

/// A (scaled time, scaled position) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    pub tau: f64,
    pub xi: f64,
}

impl SpaceTimePoint {
    pub fn new(tau: f64, xi: f64) -> Self {
        Self { tau, xi }
    }
}
