//! Finite-N kernels of the source ensembles: the static double-contour kernel
//! `K_N`, the dynamical kernel `K̃ = K̃' - φ` of the Dyson chain, and the
//! Ornstein–Uhlenbeck propagator `φ`.

use std::f64::consts::{LN_2, PI, SQRT_2};

use nalgebra::DMatrix;

use super::contour::{ContourOptions, DoubleContour, Exponent};
use super::SourceSpec;
use crate::error::{ensure_finite, Error, Result};

fn static_engine(src: &SourceSpec, opts: ContourOptions) -> Result<DoubleContour> {
    let e = Exponent { alpha: 1.0, beta: 2.0 };
    DoubleContour::new(src.epsilons(), e, e, opts)
}

/// Symmetrized static kernel `e^{(x² - y²)/2} K_N(x, y)` on a grid.
///
/// For `ε ≡ 0` this is the Hermite kernel `Σ_{j<N} ψ_j(x) ψ_j(y)`.
pub fn static_block(
    src: &SourceSpec,
    xs: &[f64],
    ys: &[f64],
    opts: ContourOptions,
) -> Result<DMatrix<f64>> {
    let engine = static_engine(src, opts)?;
    let row: Vec<f64> = xs.iter().map(|x| 0.5 * x * x + LN_2).collect();
    let col: Vec<f64> = ys.iter().map(|y| -0.5 * y * y).collect();
    engine.matrix(xs, ys, &row, &col)
}

/// Static finite-N kernel `K_N(x, y)` of `H + V`, `H ~ e^{-tr H²}`,
/// `V = diag(ε)`, in the unsymmetrized gauge of its double-contour form.
pub fn k_finite_static(x: f64, y: f64, src: &SourceSpec) -> Result<f64> {
    ensure_finite("kernel position", x)?;
    ensure_finite("kernel position", y)?;
    let engine = static_engine(src, ContourOptions::default())?;
    Ok(engine.matrix(&[x], &[y], &[LN_2], &[0.0])?[(0, 0)])
}

/// Log of the propagator `φ(t_i, x; t_j, y)` for `t_i < t_j`.
fn log_phi(ti: f64, x: f64, tj: f64, y: f64) -> f64 {
    let d = ti - tj;
    let q = -(2.0 * d).exp_m1(); // 1 - e^{2d}
    let e = d.exp();
    0.5 * (d - (PI * q).ln()) - (y - e * x).powi(2) / q
}

/// Ornstein–Uhlenbeck propagator between eigenvalue times:
/// `sqrt(e^{d} / (π(1 - e^{2d}))) exp(-(y - e^{d} x)² / (1 - e^{2d}))`, `d = t_i - t_j`,
/// for `t_i < t_j`, and `0` for `t_i > t_j`. Coincident times are a domain
/// error (the propagator degenerates to a delta function).
pub fn phi_ou(ti: f64, x: f64, tj: f64, y: f64) -> Result<f64> {
    for v in [ti, x, tj, y] {
        ensure_finite("propagator argument", v)?;
    }
    if ti == tj {
        return Err(Error::Domain(
            "the propagator at coincident times is a delta function".into(),
        ));
    }
    if ti > tj {
        return Ok(0.0);
    }
    Ok(log_phi(ti, x, tj, y).exp())
}

/// Extra diagonal gauge applied to a dynamical block: the entry `(x, y)` is
/// multiplied by `exp(row(x) - col(y))` on top of the symmetric conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Gauge {
    pub row: f64,
    pub col: f64,
}

/// Block of the dynamical kernel in the symmetric gauge
/// `e^{(y² - x²)/2} K̃(t_r, x; t_s, y)`, rows at time `t_r`, columns at `t_s`.
///
/// `src` holds the source `V` of the chain, whose first time slice is
/// `H₁ = V/2 + GUE`; the contour roots are `ε' = ε / sqrt 2`.
pub(crate) fn dynamical_block_gauged(
    src: &SourceSpec,
    tr: f64,
    xs: &[f64],
    ts: f64,
    ys: &[f64],
    opts: ContourOptions,
    gauge: Gauge,
) -> Result<DMatrix<f64>> {
    let roots: Vec<f64> = src.epsilons().iter().map(|e| e / SQRT_2).collect();
    let row_exp = Exponent {
        alpha: 0.5 * (-2.0 * tr).exp(),
        beta: SQRT_2 * (-tr).exp(),
    };
    let col_exp = Exponent {
        alpha: 0.5 * (-2.0 * ts).exp(),
        beta: SQRT_2 * (-ts).exp(),
    };
    let engine = DoubleContour::new(&roots, row_exp, col_exp, opts)?;
    let prefactor = 0.5 * LN_2 - 0.5 * (tr + ts);
    let row: Vec<f64> = xs
        .iter()
        .map(|x| 0.5 * x * x + prefactor + gauge.row)
        .collect();
    let col: Vec<f64> = ys.iter().map(|y| -0.5 * y * y - gauge.col).collect();
    let mut k = engine.matrix(xs, ys, &row, &col)?;
    if tr < ts {
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let l = log_phi(tr, x, ts, y) + 0.5 * (y * y - x * x) + gauge.row - gauge.col;
                k[(i, j)] -= l.exp();
            }
        }
    }
    Ok(k)
}

/// Block of the dynamical kernel in the symmetric gauge; see
/// [`k_finite_dyn`].
pub fn dynamical_block(
    src: &SourceSpec,
    tr: f64,
    xs: &[f64],
    ts: f64,
    ys: &[f64],
    opts: ContourOptions,
) -> Result<DMatrix<f64>> {
    dynamical_block_gauged(src, tr, xs, ts, ys, opts, Gauge::default())
}

/// Dynamical kernel of the Dyson chain started from `V/2 + GUE`,
/// returned in the symmetric gauge `e^{(y² - x²)/2} (K̃'(t_r,x; t_s,y) - φ(t_r,x; t_s,y))`.
/// The propagator is subtracted only for `t_r < t_s`. The gauge is a diagonal
/// similarity and leaves every Fredholm determinant unchanged.
pub fn k_finite_dyn(tr: f64, x: f64, ts: f64, y: f64, src: &SourceSpec) -> Result<f64> {
    for v in [tr, x, ts, y] {
        ensure_finite("kernel argument", v)?;
    }
    Ok(dynamical_block(src, tr, &[x], ts, &[y], ContourOptions::default())?[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quadrature::gauss_legendre;

    /// Orthonormal oscillator functions `ψ_j` for the weight `e^{-x²}`.
    fn psi(n: usize, x: f64) -> Vec<f64> {
        // recurrence on e^{x²/2} ψ_j with running rescaling, so large |x| does not underflow
        let mut raw = vec![0.0; n];
        let mut logs = vec![0.0; n];
        let mut log_scale = -0.5 * x * x;
        let mut p0 = PI.powf(-0.25);
        raw[0] = p0;
        logs[0] = log_scale;
        if n > 1 {
            let mut p1 = SQRT_2 * x * p0;
            raw[1] = p1;
            logs[1] = log_scale;
            for j in 2..n {
                let p2 = (2.0 / j as f64).sqrt() * x * p1 - ((j - 1) as f64 / j as f64).sqrt() * p0;
                p0 = p1;
                p1 = p2;
                let m = p1.abs().max(p0.abs());
                if m > 1e100 {
                    p0 /= m;
                    p1 /= m;
                    log_scale += m.ln();
                }
                raw[j] = p1;
                logs[j] = log_scale;
            }
        }
        raw.iter().zip(&logs).map(|(r, l)| r * l.exp()).collect()
    }

    fn hermite_kernel(n: usize, x: f64, y: f64) -> f64 {
        psi(n, x).iter().zip(psi(n, y)).map(|(a, b)| a * b).sum()
    }

    /// `Σ_j ψ_j(x) ψ_j(y) e^{-(j + 1/2)(t_s - t_r)}`.
    fn hermite_dyn(n: usize, tr: f64, x: f64, ts: f64, y: f64) -> f64 {
        psi(n, x)
            .iter()
            .zip(psi(n, y))
            .enumerate()
            .map(|(j, (a, b))| a * b * (-(j as f64 + 0.5) * (ts - tr)).exp())
            .sum()
    }

    #[test]
    fn one_by_one_gaussian() {
        let src = SourceSpec::new(vec![0.0]).unwrap();
        for x in [-1.5, 0.0, 0.8] {
            let k = k_finite_static(x, 0.3, &src).unwrap();
            assert!((k - (-x * x).exp() / PI.sqrt()).abs() < 1e-13);
        }
        // shifted source: density e^{-(x - ε)²}/sqrt(π) on the diagonal
        let src = SourceSpec::new(vec![1.2]).unwrap();
        for x in [-1.0, 1.2, 2.5] {
            let k = static_block(&src, &[x], &[x], ContourOptions::default()).unwrap();
            let want = (-(x - 1.2f64).powi(2)).exp() / PI.sqrt();
            assert!((k[(0, 0)] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_source_is_hermite_kernel() {
        for n in [1, 3, 6] {
            let src = SourceSpec::zero(n).unwrap();
            let grid: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
            let k = static_block(&src, &grid, &grid, ContourOptions::default()).unwrap();
            for (i, &x) in grid.iter().enumerate() {
                for (j, &y) in grid.iter().enumerate() {
                    let d = (k[(i, j)] - hermite_kernel(n, x, y)).abs();
                    assert!(d < 1e-9, "N={n} ({x},{y}): {d:e}");
                }
            }
        }
    }

    fn edge_grid(n: usize, lo: f64, step: f64) -> Vec<f64> {
        let nf = n as f64;
        (0..9)
            .map(|i| (2.0 * nf).sqrt() + (lo + step * i as f64) / (SQRT_2 * nf.powf(1.0 / 6.0)))
            .collect()
    }

    fn worst_vs_hermite(n: usize, grid: &[f64]) -> f64 {
        let src = SourceSpec::zero(n).unwrap();
        let k = static_block(&src, grid, grid, ContourOptions::default()).unwrap();
        let mut worst: f64 = 0.0;
        for (i, &x) in grid.iter().enumerate() {
            for (j, &y) in grid.iter().enumerate() {
                worst = worst.max((k[(i, j)] - hermite_kernel(n, x, y)).abs());
            }
        }
        worst
    }

    #[test]
    fn zero_source_edge_window() {
        for n in [8, 12, 50, 200, 800] {
            let near = worst_vs_hermite(n, &edge_grid(n, -4.0, 1.5));
            assert!(near < 1e-9, "N={n}: {near:e}");
            // deeper into the bulk the non-crossing contours lose digits
            let deep = worst_vs_hermite(n, &edge_grid(n, -8.0, 2.0));
            assert!(deep < 1e-7, "N={n}: {deep:e}");
        }
    }

    #[test]
    fn static_contour_refinement() {
        let src = SourceSpec::new(vec![1.0, -0.3, 0.0, 0.0]).unwrap();
        let grid = [-2.0, -0.4, 0.5, 1.7, 3.0, 6.0];
        let opts = ContourOptions::default();
        let a = static_block(&src, &grid, &grid, opts).unwrap();
        let b = static_block(&src, &grid, &grid, opts.refined()).unwrap();
        assert!((a - b).amax() < 1e-12);
    }

    #[test]
    fn dynamical_equal_times_match_static() {
        // K̃' at t = 0 is the static kernel with ε/2, up to the symmetric gauge
        let dyn_src = SourceSpec::new(vec![1.4, 0.0, -0.6]).unwrap();
        let st_src = SourceSpec::new(vec![0.7, 0.0, -0.3]).unwrap();
        let grid = [-1.5, -0.2, 0.9, 2.1];
        let opts = ContourOptions::default();
        let d = dynamical_block(&dyn_src, 0.0, &grid, 0.0, &grid, opts).unwrap();
        let s = static_block(&st_src, &grid, &grid, opts).unwrap();
        assert!((d - s).amax() < 1e-11);
    }

    #[test]
    fn dynamical_zero_source_is_extended_hermite_kernel() {
        let n = 4;
        let src = SourceSpec::zero(n).unwrap();
        let grid = [-1.8, -0.5, 0.3, 1.6];
        let opts = ContourOptions::default();
        for (tr, ts) in [(0.0, 0.0), (0.7, 0.0), (0.0, 0.7), (0.3, 1.1)] {
            let k = dynamical_block(&src, tr, &grid, ts, &grid, opts).unwrap();
            for (i, &x) in grid.iter().enumerate() {
                for (j, &y) in grid.iter().enumerate() {
                    let mut want = hermite_dyn(n, tr, x, ts, y);
                    if tr < ts {
                        want -= (0.5 * (y * y - x * x) + log_phi(tr, x, ts, y)).exp();
                    }
                    let d = (k[(i, j)] - want).abs();
                    assert!(d < 1e-10, "({tr},{ts}) ({x},{y}): {d:e}");
                }
            }
        }
    }

    #[test]
    fn propagator_properties() {
        assert_eq!(phi_ou(1.0, 0.3, 0.5, 0.2).unwrap(), 0.0);
        assert!(phi_ou(0.5, 0.3, 0.5, 0.2).is_err());
        let q = gauss_legendre(120, -12.0, 12.0).unwrap();
        for (ti, tj, x) in [(0.0, 0.4, 0.7), (-0.3, 1.5, -1.2)] {
            let mass = q.integrate(|y| phi_ou(ti, x, tj, y).unwrap());
            assert!((mass - (0.5f64 * (ti - tj)).exp()).abs() < 1e-12);
        }
        for (t, y) in [(0.5, 0.4), (2.0, -1.0)] {
            let v = q.integrate(|x| (-x * x).exp() * phi_ou(0.0, x, t, y).unwrap());
            let want = (-0.5f64 * t).exp() * (-y * y).exp();
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn dynamical_contour_refinement() {
        let src = SourceSpec::new(vec![1.0, 0.0]).unwrap();
        let grid = [-1.0, 0.5, 2.0, 4.0];
        let opts = ContourOptions::default();
        for (tr, ts) in [(0.0, 0.7), (0.7, 0.0), (0.7, 0.7)] {
            let a = dynamical_block(&src, tr, &grid, ts, &grid, opts).unwrap();
            let b = dynamical_block(&src, tr, &grid, ts, &grid, opts.refined()).unwrap();
            assert!((a - b).amax() < 1e-11);
        }
    }
}
