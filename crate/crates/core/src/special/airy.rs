//! Airy function of the first kind on the real line.
//!
//! Evaluation strategy:
//!
//! * `x > 10`: exponentially decaying asymptotic expansion (relative truncation
//!   error below `e^{-2ζ} ≈ 5e-19` at the switch point).
//! * `x < -20`: oscillatory asymptotic expansion (error below `e^{-2ζ}` with
//!   `ζ = 59.6`).
//! * `-20 ≤ x ≤ 10`: Taylor expansion about the nearest node of a grid with
//!   spacing 1/8. The node values are produced once by Taylor-stepping the
//!   Airy equation `y'' = x y`: downward from `x = 10` (where `Ai` is the
//!   dominant solution, so the stepping is stable) and from the exact Maclaurin
//!   data at `x = 0` into the oscillatory region.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{ensure_finite, Result};
use crate::special::quadrature::{composite_gauss_legendre, Quadrature};

/// `Ai(0) = 3^{-2/3} / Γ(2/3)`.
pub const AI_0: f64 = 0.355_028_053_887_817_239_26;
/// `Ai'(0) = -3^{-1/3} / Γ(1/3)`.
pub const AI_PRIME_0: f64 = -0.258_819_403_792_806_798_41;

const GRID_LO: f64 = -20.0;
const GRID_HI: f64 = 10.0;
const GRID_STEP: f64 = 0.125;
const STEP_TERMS: usize = 40;
const EVAL_TERMS: usize = 26;

struct Table {
    value: Vec<f64>,
    slope: Vec<f64>,
}

fn node_x(i: usize) -> f64 {
    GRID_LO + i as f64 * GRID_STEP
}

/// Taylor coefficients of the solution of `y'' = x y` about `x0`.
fn taylor_coefficients(x0: f64, y: f64, dy: f64, out: &mut [f64]) {
    out[0] = y;
    out[1] = dy;
    for k in 0..out.len() - 2 {
        let prev = if k == 0 { 0.0 } else { out[k - 1] };
        out[k + 2] = (x0 * out[k] + prev) / ((k + 1) * (k + 2)) as f64;
    }
}

fn taylor_eval(coef: &[f64], h: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for k in (0..coef.len()).rev() {
        v = v * h + coef[k];
        if k > 0 {
            d = d * h + k as f64 * coef[k];
        }
    }
    (v, d)
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ((GRID_HI - GRID_LO) / GRID_STEP).round() as usize + 1;
        let zero = (-GRID_LO / GRID_STEP).round() as usize;
        let mut value = vec![0.0; n];
        let mut slope = vec![0.0; n];
        let mut coef = [0.0; STEP_TERMS];

        let (v, d) = asymptotic_positive(GRID_HI);
        value[n - 1] = v;
        slope[n - 1] = d;
        for i in (zero + 1..n).rev() {
            taylor_coefficients(node_x(i), value[i], slope[i], &mut coef);
            let (v, d) = taylor_eval(&coef, -GRID_STEP);
            value[i - 1] = v;
            slope[i - 1] = d;
        }
        value[zero] = AI_0;
        slope[zero] = AI_PRIME_0;
        for i in (1..=zero).rev() {
            taylor_coefficients(node_x(i), value[i], slope[i], &mut coef);
            let (v, d) = taylor_eval(&coef, -GRID_STEP);
            value[i - 1] = v;
            slope[i - 1] = d;
        }
        Table { value, slope }
    })
}

fn u_coefficients() -> &'static [f64; 40] {
    static U: OnceLock<[f64; 40]> = OnceLock::new();
    U.get_or_init(|| {
        let mut u = [0.0; 40];
        u[0] = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
        }
        u
    })
}

fn v_coefficient(k: usize) -> f64 {
    let u = u_coefficients();
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]
    }
}

/// Asymptotic series `Σ (±1)^k c_k / ζ^k`, truncated at the smallest term.
fn asymptotic_sum(zeta: f64, alternate: bool, coef: impl Fn(usize) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for k in 0..40 {
        let term = coef(k) / zk;
        if term.abs() > last {
            break;
        }
        sum += if alternate && k % 2 == 1 { -term } else { term };
        last = term.abs();
        if last < 1e-18 * sum.abs() {
            break;
        }
        zk *= zeta;
    }
    sum
}

/// `(Ai(x), Ai'(x))` for large positive `x`.
fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let scale = (-zeta).exp() / (2.0 * PI.sqrt());
    let u = u_coefficients();
    let ai = scale / q * asymptotic_sum(zeta, true, |k| u[k]);
    let dai = -scale * q * asymptotic_sum(zeta, true, v_coefficient);
    (ai, dai)
}

/// `(Ai(x), Ai'(x))` for large negative `x`.
fn asymptotic_negative(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let q = z.sqrt().sqrt();
    let u = u_coefficients();
    // even/odd parts with alternating signs: Σ(-1)^k c_{2k} ζ^{-2k}, Σ(-1)^k c_{2k+1} ζ^{-2k-1}
    let split = |c: &dyn Fn(usize) -> f64| {
        let (mut even, mut odd) = (0.0, 0.0);
        let mut last = f64::INFINITY;
        let mut zk = 1.0;
        for k in 0..40 {
            let term = c(k) / zk;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += sign * term;
            } else {
                odd += sign * term;
            }
            zk *= zeta;
        }
        (even, odd)
    };
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let (pe, po) = split(&|k| u[k]);
    let ai = (c * pe + s * po) / (PI.sqrt() * q);
    let (qe, qo) = split(&v_coefficient);
    let dai = q / PI.sqrt() * (s * qe - c * qo);
    (ai, dai)
}

fn airy_pair(x: f64) -> (f64, f64) {
    if x > GRID_HI {
        return asymptotic_positive(x);
    }
    if x < GRID_LO {
        return asymptotic_negative(x);
    }
    let t = table();
    let i = ((x - GRID_LO) / GRID_STEP).round() as usize;
    let i = i.min(t.value.len() - 1);
    let x0 = node_x(i);
    let mut coef = [0.0; EVAL_TERMS];
    taylor_coefficients(x0, t.value[i], t.slope[i], &mut coef);
    taylor_eval(&coef, x - x0)
}

/// `Ai(x)` without the finiteness check; for inner loops.
#[inline]
pub(crate) fn ai(x: f64) -> f64 {
    airy_pair(x).0
}

/// `(Ai(x), Ai'(x))` without the finiteness check.
#[cfg(test)]
#[inline]
pub(crate) fn ai_and_prime(x: f64) -> (f64, f64) {
    airy_pair(x)
}

/// Airy function `Ai(x)`; absolute error below `1e-12` on `[-30, 30]`.
pub fn airy_ai(x: f64) -> Result<f64> {
    ensure_finite("airy_ai argument", x)?;
    Ok(ai(x))
}

/// Derivative `Ai'(x)`.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    ensure_finite("airy_ai_prime argument", x)?;
    Ok(airy_pair(x).1)
}

fn unit_panel() -> &'static Quadrature {
    static Q: OnceLock<Quadrature> = OnceLock::new();
    Q.get_or_init(|| composite_gauss_legendre(20, 1, 0.0, 1.0).expect("valid rule"))
}

/// `∫_y^∞ Ai(u) du`.
///
/// For `y ≥ 0` the integral over `[y, y + 20]` is taken directly; for `y < 0`
/// the value is `1/3 + ∫_y^0 Ai`, with unit-width Gauss–Legendre panels across
/// the oscillatory stretch.
pub fn airy_tail(y: f64) -> Result<f64> {
    ensure_finite("airy_tail argument", y)?;
    Ok(tail(y))
}

pub(crate) fn tail(y: f64) -> f64 {
    let panel = unit_panel();
    let integrate = |a: f64, b: f64, panels: usize| -> f64 {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * width;
                panel.integrate(|t| ai(lo + width * t)) * width
            })
            .sum()
    };
    if y >= 0.0 {
        // Ai(u) < 2e-27 beyond u = 20, so [y, y + 20] in half-unit panels suffices.
        if y > 120.0 {
            return 0.0;
        }
        integrate(y, y + 20.0, 40)
    } else {
        let panels = ((-y) * 2.0).ceil().max(1.0) as usize;
        1.0 / 3.0 + integrate(y, 0.0, panels)
    }
}
