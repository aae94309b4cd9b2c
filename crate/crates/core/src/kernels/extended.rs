//! [`ExtendedKernel`]: one evaluatable kernel over (time, position) pairs,
//! covering every variant the Fredholm evaluators consume.

use nalgebra::DMatrix;

use super::contour::ContourOptions;
use super::finite::{dynamical_block_gauged, static_block, Gauge};
use super::limit::{gaussian_width, k_gauss_limit, transition_block};
use super::{SourceSpec, SpaceTimePoint};
use crate::error::{ensure_finite, Error, Result};

/// Which kernel is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelVariant {
    /// Airy kernel `K2` (single time).
    Airy,
    /// `K12` (single time).
    Goe2,
    /// GOE²–GUE transition kernel with parameter `ω` (multi-time).
    Transition { omega: f64 },
    /// Static finite-N kernel of `H + V` (single time).
    FiniteStatic(SourceSpec),
    /// Dynamical finite-N kernel of the Dyson chain on the given time grid.
    FiniteDynamical { source: SourceSpec, times: Vec<f64> },
    /// Rank-one Gaussian-regime kernel in the variable `X` (single time).
    GaussLimit { lambda: f64, n: usize },
}

/// Affine change of variables for the finite-N kernels:
/// `x = center + scale·ξ`, `t = time_scale·τ`. Blocks are multiplied by the
/// Jacobian `scale`, and dynamical blocks by the diagonal gauge
/// `e^{-gauge·(t_r - t_s)}`, so that entries converge pointwise to the
/// limiting kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeScaling {
    pub center: f64,
    pub scale: f64,
    pub time_scale: f64,
    pub gauge: f64,
}

impl EdgeScaling {
    /// Soft-edge scaling of an `N × N` matrix with weight `e^{-tr H²}`:
    /// `x = sqrt(2N) + ξ / (sqrt2 N^{1/6})`, `t = τ N^{-1/3}`.
    pub fn soft_edge(n: usize) -> Self {
        let nf = n as f64;
        Self {
            center: (2.0 * nf).sqrt(),
            scale: 1.0 / (2f64.sqrt() * nf.powf(1.0 / 6.0)),
            time_scale: nf.powf(-1.0 / 3.0),
            gauge: nf,
        }
    }
}

/// A kernel together with its numerical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedKernel {
    variant: KernelVariant,
    contour: ContourOptions,
    scaling: Option<EdgeScaling>,
}

impl ExtendedKernel {
    fn from_variant(variant: KernelVariant) -> Self {
        Self {
            variant,
            contour: ContourOptions::default(),
            scaling: None,
        }
    }

    pub fn airy() -> Self {
        Self::from_variant(KernelVariant::Airy)
    }

    pub fn goe2() -> Self {
        Self::from_variant(KernelVariant::Goe2)
    }

    pub fn transition(omega: f64) -> Result<Self> {
        ensure_finite("omega", omega)?;
        Ok(Self::from_variant(KernelVariant::Transition { omega }))
    }

    pub fn finite_static(source: SourceSpec) -> Self {
        Self::from_variant(KernelVariant::FiniteStatic(source))
    }

    /// `times` must be strictly increasing and start at `0`.
    pub fn finite_dynamical(source: SourceSpec, times: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times[0] != 0.0 {
            return Err(Error::Config("dynamical time grid must start at 0".into()));
        }
        if times.len() > 8 {
            return Err(Error::Config(format!(
                "at most 8 time slices are supported, got {}",
                times.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::Config(format!(
                "dynamical time grid must be strictly increasing: {times:?}"
            )));
        }
        Ok(Self::from_variant(KernelVariant::FiniteDynamical { source, times }))
    }

    pub fn gauss_limit(lambda: f64, n: usize) -> Result<Self> {
        gaussian_width(lambda)?;
        Ok(Self::from_variant(KernelVariant::GaussLimit { lambda, n }))
    }

    /// Switch a finite-N kernel to soft-edge variables.
    pub fn edge_scaled(mut self) -> Self {
        let n = match &self.variant {
            KernelVariant::FiniteStatic(s) => s.n(),
            KernelVariant::FiniteDynamical { source, .. } => source.n(),
            _ => return self,
        };
        self.scaling = Some(EdgeScaling::soft_edge(n));
        self
    }

    pub fn with_scaling(mut self, scaling: Option<EdgeScaling>) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_contour(mut self, contour: ContourOptions) -> Self {
        self.contour = contour;
        self
    }

    pub fn variant(&self) -> &KernelVariant {
        &self.variant
    }

    pub fn contour(&self) -> ContourOptions {
        self.contour
    }

    pub fn scaling(&self) -> Option<EdgeScaling> {
        self.scaling
    }

    /// Copy with doubled contour orders (no effect on the limiting kernels).
    pub fn refined(&self) -> Self {
        Self {
            contour: self.contour.refined(),
            ..self.clone()
        }
    }

    /// True for the `N → ∞` kernels.
    pub fn is_limiting(&self) -> bool {
        !matches!(
            self.variant,
            KernelVariant::FiniteStatic(_) | KernelVariant::FiniteDynamical { .. }
        )
    }

    pub fn is_multi_time(&self) -> bool {
        matches!(
            self.variant,
            KernelVariant::Transition { .. } | KernelVariant::FiniteDynamical { .. }
        )
    }

    fn position(&self, xi: f64) -> f64 {
        match self.scaling {
            Some(s) => s.center + s.scale * xi,
            None => xi,
        }
    }

    fn single_time(&self, ta: f64, tb: f64) -> Result<()> {
        if ta != 0.0 || tb != 0.0 {
            return Err(Error::Config(format!(
                "{:?} is a single-time kernel; times must be 0",
                self.variant
            )));
        }
        Ok(())
    }

    /// Kernel matrix `K(ta, xs[i]; tb, ys[j])`.
    pub fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64]) -> Result<DMatrix<f64>> {
        for &v in xs.iter().chain(ys).chain([&ta, &tb]) {
            ensure_finite("kernel argument", v)?;
        }
        match &self.variant {
            KernelVariant::Airy => {
                self.single_time(ta, tb)?;
                Ok(super::limit::k2_ext_block(0.0, xs, 0.0, ys))
            }
            KernelVariant::Goe2 => {
                self.single_time(ta, tb)?;
                transition_block(0.0, xs, 0.0, ys, 0.0)
            }
            KernelVariant::Transition { omega } => transition_block(ta, xs, tb, ys, *omega),
            KernelVariant::GaussLimit { lambda, .. } => {
                self.single_time(ta, tb)?;
                let b = gaussian_width(*lambda)?;
                let mut out = DMatrix::zeros(xs.len(), ys.len());
                for (i, &x) in xs.iter().enumerate() {
                    let v = k_gauss_limit(x, *lambda)? * b;
                    out.row_mut(i).fill(v);
                }
                Ok(out)
            }
            KernelVariant::FiniteStatic(src) => {
                self.single_time(ta, tb)?;
                let px: Vec<f64> = xs.iter().map(|&x| self.position(x)).collect();
                let py: Vec<f64> = ys.iter().map(|&y| self.position(y)).collect();
                let mut k = static_block(src, &px, &py, self.contour)?;
                if let Some(s) = self.scaling {
                    k *= s.scale;
                }
                Ok(k)
            }
            KernelVariant::FiniteDynamical { source, times } => {
                for t in [ta, tb] {
                    if !times.contains(&t) {
                        return Err(Error::Config(format!(
                            "time {t} is not on the kernel's grid {times:?}"
                        )));
                    }
                }
                let px: Vec<f64> = xs.iter().map(|&x| self.position(x)).collect();
                let py: Vec<f64> = ys.iter().map(|&y| self.position(y)).collect();
                let (tr, ts, gauge, jac) = match self.scaling {
                    Some(s) => {
                        let (tr, ts) = (s.time_scale * ta, s.time_scale * tb);
                        let g = Gauge {
                            row: -s.gauge * tr,
                            col: -s.gauge * ts,
                        };
                        (tr, ts, g, s.scale)
                    }
                    None => (ta, tb, Gauge::default(), 1.0),
                };
                let mut k =
                    dynamical_block_gauged(source, tr, &px, ts, &py, self.contour, gauge)?;
                k *= jac;
                Ok(k)
            }
        }
    }

    /// Single evaluation `K(p1; p2)`.
    pub fn eval(&self, p1: SpaceTimePoint, p2: SpaceTimePoint) -> Result<f64> {
        Ok(self.block(p1.tau, &[p1.xi], p2.tau, &[p2.xi])?[(0, 0)])
    }
}
