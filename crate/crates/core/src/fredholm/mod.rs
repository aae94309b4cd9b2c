//! Nyström evaluation of Fredholm determinants `det(1 - χ K χ)` on
//! Gauss–Legendre windows `(s_j, s_j + L)`, single-time and block multi-time,
//! and the distribution functions built on them.
//!
//! Every public result is computed at `n` and `2n` nodes (and, for the
//! finite-N kernels, a doubled contour rule). The two values must agree to
//! [`LIMIT_TOL`] or [`FINITE_TOL`], otherwise an [`Error::Accuracy`] is raised.

mod dist;

pub use dist::{dist_f2, dist_finite_n, dist_goe2, dist_transition};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::kernels::ExtendedKernel;
use crate::linalg::log_det;
use crate::special::quadrature::gauss_legendre;

/// Certificate tolerance for the limiting kernels.
pub const LIMIT_TOL: f64 = 1e-8;
/// Certificate tolerance for the finite-N kernels.
pub const FINITE_TOL: f64 = 1e-6;
pub const DEFAULT_QUAD_ORDER: usize = 48;
pub const DEFAULT_CUTOFF: f64 = 14.0;

/// A determinant value with its self-convergence certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    /// Value at the doubled order, clamped to `[0, 1]`.
    pub value: f64,
    /// Difference between the base and doubled evaluations.
    pub delta: f64,
    /// Base number of nodes per time slice.
    pub quad_order: usize,
}

/// Multi-time gap probability `P[h(τ_j) ≤ s_j for all j]` as a block
/// Fredholm determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantProblem {
    pub kernel: ExtendedKernel,
    pub times: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub quad_order: usize,
    pub cutoff: f64,
}

impl DeterminantProblem {
    pub fn new(kernel: ExtendedKernel, times: Vec<f64>, thresholds: Vec<f64>) -> Result<Self> {
        let p = Self {
            kernel,
            times,
            thresholds,
            quad_order: DEFAULT_QUAD_ORDER,
            cutoff: DEFAULT_CUTOFF,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_quad_order(mut self, n: usize) -> Result<Self> {
        self.quad_order = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Result<Self> {
        self.cutoff = cutoff;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.is_empty() {
            return Err(Error::Config("determinant needs at least one time".into()));
        }
        if self.times.len() != self.thresholds.len() {
            return Err(Error::Config(format!(
                "{} times but {} thresholds",
                self.times.len(),
                self.thresholds.len()
            )));
        }
        for &v in self.times.iter().chain(&self.thresholds) {
            ensure_finite("determinant time/threshold", v)?;
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!(
                "times must be strictly increasing: {:?}",
                self.times
            )));
        }
        if self.quad_order < 8 {
            return Err(Error::Config(format!(
                "quad_order must be at least 8, got {}",
                self.quad_order
            )));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(Error::Config(format!("cutoff must be positive, got {}", self.cutoff)));
        }
        Ok(())
    }
}

/// `det(I - W^{1/2} K W^{1/2})` with `n` nodes per slice, uncertified.
fn nystrom(
    kernel: &ExtendedKernel,
    times: &[f64],
    thresholds: &[f64],
    n: usize,
    cutoff: f64,
) -> Result<f64> {
    let m = times.len();
    let rules = thresholds
        .iter()
        .map(|&s| gauss_legendre(n, s, s + cutoff))
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<Vec<f64>> = rules
        .iter()
        .map(|q| q.weights.iter().map(|w| w.sqrt()).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).collect();
    let blocks = pairs
        .par_iter()
        .map(|&(a, b)| kernel.block(times[a], &rules[a].nodes, times[b], &rules[b].nodes))
        .collect::<Result<Vec<_>>>()?;

    let mut mat = DMatrix::<f64>::identity(m * n, m * n);
    for (&(a, b), blk) in pairs.iter().zip(&blocks) {
        for i in 0..n {
            for j in 0..n {
                mat[(a * n + i, b * n + j)] -= roots[a][i] * blk[(i, j)] * roots[b][j];
            }
        }
    }
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite entry in the Nyström matrix".into()));
    }
    let (log_abs, sign) = log_det(mat)?;
    Ok(sign * log_abs.exp())
}

fn certify(
    kernel: &ExtendedKernel,
    times: &[f64],
    thresholds: &[f64],
    n: usize,
    cutoff: f64,
) -> Result<Certified> {
    let coarse = nystrom(kernel, times, thresholds, n, cutoff)?;
    let fine_kernel = if kernel.is_limiting() {
        kernel.clone()
    } else {
        kernel.refined()
    };
    let fine = nystrom(&fine_kernel, times, thresholds, 2 * n, cutoff)?;
    let delta = (fine - coarse).abs();
    let tol = if kernel.is_limiting() { LIMIT_TOL } else { FINITE_TOL };
    if !(delta <= tol) {
        return Err(Error::Accuracy {
            what: format!("{:?} at thresholds {thresholds:?}", kernel.variant()),
            delta,
            tol,
        });
    }
    Ok(Certified {
        value: fine.clamp(0.0, 1.0),
        delta,
        quad_order: n,
    })
}

/// Single-time determinant `det(1 - K)` on `L²(s, s + cutoff)` with its
/// certificate.
pub fn det_single_certified(
    kernel: &ExtendedKernel,
    s: f64,
    quad_order: usize,
    cutoff: f64,
) -> Result<Certified> {
    if kernel.is_multi_time() {
        return Err(Error::Config(format!(
            "{:?} is a multi-time kernel; use det_multi",
            kernel.variant()
        )));
    }
    let p = DeterminantProblem {
        kernel: kernel.clone(),
        times: vec![0.0],
        thresholds: vec![s],
        quad_order,
        cutoff,
    };
    p.validate()?;
    certify(kernel, &p.times, &p.thresholds, quad_order, cutoff)
}

/// Single-time determinant `det(1 - K)` on `L²(s, s + cutoff)`.
pub fn det_single(kernel: &ExtendedKernel, s: f64, quad_order: usize, cutoff: f64) -> Result<f64> {
    Ok(det_single_certified(kernel, s, quad_order, cutoff)?.value)
}

/// Block determinant of a multi-time problem with its certificate.
pub fn det_multi_certified(problem: &DeterminantProblem) -> Result<Certified> {
    problem.validate()?;
    if !problem.kernel.is_multi_time() {
        return Err(Error::Config(format!(
            "{:?} is a single-time kernel; use det_single",
            problem.kernel.variant()
        )));
    }
    certify(
        &problem.kernel,
        &problem.times,
        &problem.thresholds,
        problem.quad_order,
        problem.cutoff,
    )
}

/// Block determinant of a multi-time problem.
pub fn det_multi(problem: &DeterminantProblem) -> Result<f64> {
    Ok(det_multi_certified(problem)?.value)
}
