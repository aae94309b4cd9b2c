//! Limiting kernels built from the Airy function: `K2`, `K12`, the extended
//! Airy kernel, the GOE²–GUE transition kernel and the Gaussian-regime kernel.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::SpaceTimePoint;
use crate::error::{ensure_finite, Error, Result};
use crate::special::airy::{ai, tail};
use crate::special::quadrature::{composite_gauss_legendre, Quadrature};

/// Truncation of the `λ`-integrals on the decaying side.
const LAMBDA_MAX: f64 = 40.0;
/// Time gaps below this use the full-line identity for the backward branch.
const SMALL_GAP: f64 = 1.0;

fn decaying_rule() -> &'static Quadrature {
    static Q: OnceLock<Quadrature> = OnceLock::new();
    Q.get_or_init(|| composite_gauss_legendre(40, 4, 0.0, LAMBDA_MAX).expect("valid rule"))
}

/// Rule on `[0, min(40, 45/rate)]` for integrands damped by `e^{-rate·μ}` that
/// oscillate like `Ai(ξ - μ)`.
fn damped_rule(rate: f64) -> Quadrature {
    let length = (45.0 / rate).min(LAMBDA_MAX);
    let panels = (length / 2.0).ceil().max(1.0) as usize;
    composite_gauss_legendre(16, panels, 0.0, length).expect("valid rule")
}

fn check_point(p: SpaceTimePoint) -> Result<()> {
    ensure_finite("kernel time", p.tau)?;
    ensure_finite("kernel position", p.xi)
}

/// Airy kernel `K2(x, y) = ∫_0^∞ Ai(x + σ) Ai(y + σ) dσ`.
pub fn k2(x: f64, y: f64) -> Result<f64> {
    ensure_finite("k2 argument", x)?;
    ensure_finite("k2 argument", y)?;
    Ok(decaying_rule().integrate(|s| ai(x + s) * ai(y + s)))
}

/// `K12(x, y) = K2(x, y) + Ai(x) (1 - ∫_y^∞ Ai)`.
pub fn k12(x: f64, y: f64) -> Result<f64> {
    Ok(k2(x, y)? + ai(x) * (1.0 - tail(y)))
}

/// `∫_{-∞}^{∞} e^{gλ} Ai(a + λ) Ai(b + λ) dλ` for `g > 0`.
fn airy_product_transform(g: f64, a: f64, b: f64) -> f64 {
    let expo = g * g * g / 12.0 - 0.5 * g * (a + b) - (a - b) * (a - b) / (4.0 * g);
    expo.exp() / (4.0 * PI * g).sqrt()
}

/// Extended Airy kernel.
///
/// For `τ1 ≥ τ2` this is `∫_0^∞ e^{-λ(τ1-τ2)} Ai(ξ1+λ) Ai(ξ2+λ) dλ`; otherwise
/// `-∫_{-∞}^0` of the same integrand. The backward branch with gap `g < 1`
/// decays too slowly to truncate, so it is rewritten as the forward integral
/// with `e^{+gλ}` minus the closed-form full-line transform.
pub fn k2_ext(p1: SpaceTimePoint, p2: SpaceTimePoint) -> Result<f64> {
    check_point(p1)?;
    check_point(p2)?;
    let (x, y) = (p1.xi, p2.xi);
    let t = p1.tau - p2.tau;
    if t >= 0.0 {
        return Ok(decaying_rule().integrate(|l| (-l * t).exp() * ai(x + l) * ai(y + l)));
    }
    let g = -t;
    if g < SMALL_GAP {
        let forward = decaying_rule().integrate(|l| (g * l).exp() * ai(x + l) * ai(y + l));
        Ok(forward - airy_product_transform(g, x, y))
    } else {
        Ok(-damped_rule(g).integrate(|m| (-g * m).exp() * ai(x - m) * ai(y - m)))
    }
}

/// `R(ξ, c) = ∫_0^∞ e^{-cλ} Ai(ξ - λ) dλ` for `c ≥ 0`.
///
/// For `c < 1` the oscillatory integrand is handled through
/// `∫_ℝ e^{-cλ} Ai(ξ - λ) dλ = e^{c³/3 - cξ}`, leaving a rapidly decaying
/// remainder; at `c = 0` this is `1 - ∫_ξ^∞ Ai`.
pub fn rank_one_factor(xi: f64, c: f64) -> Result<f64> {
    ensure_finite("rank-one position", xi)?;
    ensure_finite("rank-one damping", c)?;
    if c < 0.0 {
        return Err(Error::Domain(format!(
            "the rank-one integral diverges for damping c = {c} < 0"
        )));
    }
    Ok(rank_one(xi, c))
}

fn rank_one(xi: f64, c: f64) -> f64 {
    if c == 0.0 {
        1.0 - tail(xi)
    } else if c < 1.0 {
        (c * c * c / 3.0 - c * xi).exp()
            - decaying_rule().integrate(|m| (c * m).exp() * ai(xi + m))
    } else {
        damped_rule(c).integrate(|l| (-c * l).exp() * ai(xi - l))
    }
}

/// GOE²–GUE transition kernel
/// `K(τ1,ξ1; τ2,ξ2) = K2ext + Ai(ξ1) ∫_0^∞ e^{-(ω+τ2)λ} Ai(ξ2 - λ) dλ`.
///
/// `ω + τ2 = 0` is accepted (the rank-one integral converges conditionally);
/// `ω + τ2 < 0` is a domain error.
pub fn k_transition(p1: SpaceTimePoint, p2: SpaceTimePoint, omega: f64) -> Result<f64> {
    ensure_finite("omega", omega)?;
    let ext = k2_ext(p1, p2)?;
    let r = rank_one_factor(p2.xi, omega + p2.tau)?;
    Ok(ext + ai(p1.xi) * r)
}

/// `B_G = sqrt((Λ² - 1) / (2Λ²))`, the Gaussian-regime width.
pub fn gaussian_width(lambda: f64) -> Result<f64> {
    ensure_finite("Lambda", lambda)?;
    if lambda <= 1.0 {
        return Err(Error::Domain(format!(
            "Gaussian regime needs Lambda > 1, got {lambda}"
        )));
    }
    Ok(((lambda * lambda - 1.0) / (2.0 * lambda * lambda)).sqrt())
}

/// Gaussian-regime kernel `e^{-X²/2} / (sqrt(2π) B_G)`, a density in the
/// unscaled eigenvalue variable. The gauge factor `e^{sqrt(2N)Λ(y-x)}` is
/// dropped; it cancels in every determinant.
pub fn k_gauss_limit(x: f64, lambda: f64) -> Result<f64> {
    ensure_finite("k_gauss_limit argument", x)?;
    let b = gaussian_width(lambda)?;
    Ok((-0.5 * x * x).exp() / ((2.0 * PI).sqrt() * b))
}

/// `Ai(x_i + λ_q) sqrt(w_q)`-type design matrix on a real rule.
fn airy_design(xs: &[f64], rule: &Quadrature, sign: f64) -> DMatrix<f64> {
    DMatrix::from_fn(xs.len(), rule.len(), |i, q| ai(xs[i] + sign * rule.nodes[q]))
}

fn weighted_gram(a: &DMatrix<f64>, b: &DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    let mut aw = a.clone();
    for (q, &wq) in w.iter().enumerate() {
        aw.column_mut(q).scale_mut(wq);
    }
    aw * b.transpose()
}

/// Block of the extended Airy kernel between the position sets `xs` (time
/// `ta`) and `ys` (time `tb`).
pub(crate) fn k2_ext_block(ta: f64, xs: &[f64], tb: f64, ys: &[f64]) -> DMatrix<f64> {
    let t = ta - tb;
    if t >= 0.0 || -t < SMALL_GAP {
        let rule = decaying_rule();
        let w: Vec<f64> = rule
            .iter()
            .map(|(l, wq)| wq * (-l * t).exp())
            .collect();
        let a = airy_design(xs, rule, 1.0);
        let b = airy_design(ys, rule, 1.0);
        let mut k = weighted_gram(&a, &b, &w);
        if t < 0.0 {
            let g = -t;
            for (i, &x) in xs.iter().enumerate() {
                for (j, &y) in ys.iter().enumerate() {
                    k[(i, j)] -= airy_product_transform(g, x, y);
                }
            }
        }
        k
    } else {
        let g = -t;
        let rule = damped_rule(g);
        let w: Vec<f64> = rule.iter().map(|(m, wq)| -wq * (-g * m).exp()).collect();
        let a = airy_design(xs, &rule, -1.0);
        let b = airy_design(ys, &rule, -1.0);
        weighted_gram(&a, &b, &w)
    }
}

/// Block of the transition kernel; see [`k_transition`].
pub(crate) fn transition_block(
    ta: f64,
    xs: &[f64],
    tb: f64,
    ys: &[f64],
    omega: f64,
) -> Result<DMatrix<f64>> {
    let c = omega + tb;
    if c < 0.0 {
        return Err(Error::Domain(format!(
            "transition kernel needs omega + tau >= 0, got {omega} + {tb}"
        )));
    }
    let mut k = k2_ext_block(ta, xs, tb, ys);
    let r: Vec<f64> = ys.iter().map(|&y| rank_one(y, c)).collect();
    for (i, &x) in xs.iter().enumerate() {
        let a = ai(x);
        for (j, &rj) in r.iter().enumerate() {
            k[(i, j)] += a * rj;
        }
    }
    Ok(k)
}
