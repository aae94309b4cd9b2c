//! Discrete polynuclear growth with a boundary source, its multi-layer
//! extension, and the scalings of the height at the origin.
//!
//! Nucleations `ω(r, t)` live on sites with `t - |r| > 0` and `t - r` odd.
//! They are geometric, `P[k] = (1 - p) p^k`, with `p = q` in the bulk and
//! `p = α sqrt(q)` on the left edge `r = -t + 1`.

mod growth;
mod multilayer;

pub use growth::{
    draw_noise, evolve, evolve_with_noise, geometric_from_uniform, noise_parameter, run,
    run_with_rng, sample_noise, HeightField,
};
pub use multilayer::{evolve_multilayer, evolve_multilayer_with_noise, MultiLayerField};

use crate::error::{ensure_finite, Error, Result};

/// Bulk parameter `q`, source strength `α` and size `N` (final time `2N`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PngParams {
    q: f64,
    alpha: f64,
    n: usize,
}

impl PngParams {
    /// Requires `0 < q < 1`, `sqrt(q) ≤ α < 1/sqrt(q)` and `N ≥ 1`.
    pub fn new(q: f64, alpha: f64, n: usize) -> Result<Self> {
        ensure_finite("q", q)?;
        ensure_finite("alpha", alpha)?;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("q must lie in (0, 1), got {q}")));
        }
        let r = q.sqrt();
        if !(alpha >= r && alpha * r < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in [{r}, {}), got {alpha}",
                1.0 / r
            )));
        }
        if n == 0 {
            return Err(Error::Config("N must be at least 1".into()));
        }
        Ok(Self { q, alpha, n })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same parameters with another `α`.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.q, alpha, self.n)
    }
}

/// Centering and scale constants of the height at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingConstants {
    pub a: f64,
    pub d: f64,
    pub c: f64,
    /// Gaussian-regime constants, present for `α > 1`.
    pub a_g: Option<f64>,
    pub d_g: Option<f64>,
}

impl ScalingConstants {
    pub fn new(params: &PngParams) -> Self {
        let (q, al) = (params.q, params.alpha);
        let r = q.sqrt();
        let a = 2.0 * r / (1.0 - r);
        let d = (1.0 + r).cbrt() * q.powf(1.0 / 6.0) / (1.0 - r);
        let c = (1.0 + r).powf(2.0 / 3.0) / q.powf(1.0 / 6.0);
        let (a_g, d_g) = if al > 1.0 {
            let den = (al - r) * (1.0 - al * r);
            let a_g = r * (1.0 - 2.0 * al * r + al * al) / den;
            let d_g = (al.sqrt() * q.powf(0.25) * (1.0 - q).sqrt() * (al * al - 1.0).sqrt()) / den;
            (Some(a_g), Some(d_g))
        } else {
            (None, None)
        };
        Self { a, d, c, a_g, d_g }
    }
}

/// `(h0 - aN) / (d N^{1/3})`.
pub fn scale_height(h0: i64, params: &PngParams) -> f64 {
    let k = ScalingConstants::new(params);
    let n = params.n as f64;
    (h0 as f64 - k.a * n) / (k.d * n.cbrt())
}

/// `(h0 - a_G N) / (d_G N^{1/2})`, for `α > 1`.
pub fn scale_height_gaussian(h0: i64, params: &PngParams) -> Result<f64> {
    let k = ScalingConstants::new(params);
    match (k.a_g, k.d_g) {
        (Some(a_g), Some(d_g)) => {
            let n = params.n as f64;
            Ok((h0 as f64 - a_g * n) / (d_g * n.sqrt()))
        }
        _ => Err(Error::Domain(format!(
            "Gaussian scaling needs alpha > 1, got {}",
            params.alpha
        ))),
    }
}

/// Lattice site for scaled position `τ`: `2cN^{2/3}τ` rounded to the nearest
/// site of the final-time sublattice (even `r`, since `t = 2N`).
pub fn site_for_tau(tau: f64, params: &PngParams) -> Result<i64> {
    ensure_finite("tau", tau)?;
    let k = ScalingConstants::new(params);
    let n = params.n as f64;
    let x = 2.0 * k.c * n.powf(2.0 / 3.0) * tau;
    let r = 2 * (x / 2.0).round() as i64;
    if r.unsigned_abs() as usize > 2 * params.n {
        return Err(Error::Domain(format!(
            "tau = {tau} maps to site {r} outside the cone [-{0}, {0}]",
            2 * params.n
        )));
    }
    Ok(r)
}

/// `(h(r, 2N) - aN) / (d N^{1/3}) + τ²` at the site of [`site_for_tau`].
pub fn scale_height_at(field: &HeightField, tau: f64, params: &PngParams) -> Result<f64> {
    if field.t() != 2 * params.n {
        return Err(Error::Config(format!(
            "field is at t = {}, expected 2N = {}",
            field.t(),
            2 * params.n
        )));
    }
    let r = site_for_tau(tau, params)?;
    Ok(scale_height(field.get(r), params) + tau * tau)
}

/// Source strength for the transition parameter `ω`: `α = 1 - ω / (d N^{1/3})`.
pub fn alpha_from_omega(omega: f64, q: f64, n: usize) -> Result<f64> {
    ensure_finite("omega", omega)?;
    let k = ScalingConstants::new(&PngParams::new(q, 1.0, n)?);
    Ok(1.0 - omega / (k.d * (n as f64).cbrt()))
}
