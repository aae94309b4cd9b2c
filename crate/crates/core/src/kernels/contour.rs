//! Double-contour quadrature shared by the finite-N kernels.
//!
//! Both finite-N kernels reduce to
//!
//! ```text
//! J(x, y) = ∮_Γ dv/(2πi) ∫_ℝ ds/(2π)  P(u)/P(v) · e^{α_r u² - β_r u x} e^{-α_c v² + β_c v y} / (u - v),
//! u = a + is,
//! ```
//!
//! with `P(z) = Π (z - e_l)` over real roots `e_l` and `Γ` a circle enclosing
//! every root. The vertical line may sit on either side of `Γ`: moving it
//! across the circle picks up the residue at `u = v`, whose `v`-integrand
//! `e^{(α_r - α_c) v² - β_r v x + β_c v y}` is entire and integrates to zero.
//!
//! Geometry. For small `N` the circle hugs the roots and each row `x` gets its
//! own line through the real part of the saddle of `P(u) e^{α_r u² - β_r u x}`.
//! For large `N` the circle passes just outside the (double) saddle of the
//! column factor at the soft edge, of modulus `sqrt(N / 2α_c)`. All exponentials
//! are accumulated in log form with per-row and per-column maxima shifted out.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::special::quadrature::gauss_legendre;

/// Which side of the circle the vertical line is placed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineSide {
    /// Follow the saddle of each row.
    Auto,
    Left,
    Right,
}

/// Discretization parameters of the contour integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Trapezoid points on the circle.
    pub circle_points: usize,
    /// Gauss–Legendre points per panel on the vertical line.
    pub line_order: usize,
    /// Minimum clearance between the circle, the roots and the line.
    pub offset: f64,
    /// Matrix size from which the saddle-adapted geometry is used.
    pub edge_threshold: usize,
    pub line_side: LineSide,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            circle_points: 384,
            line_order: 16,
            offset: 0.25,
            edge_threshold: 8,
            line_side: LineSide::Auto,
        }
    }
}

impl ContourOptions {
    /// Both orders doubled, for self-convergence checks.
    pub fn refined(&self) -> Self {
        Self {
            circle_points: 2 * self.circle_points,
            line_order: 2 * self.line_order,
            ..*self
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.circle_points < 16 || self.line_order < 2 {
            return Err(Error::Config(format!(
                "contour rule too coarse: {} circle points, line order {}",
                self.circle_points, self.line_order
            )));
        }
        if !(self.offset > 0.0 && self.offset.is_finite()) {
            return Err(Error::Config(format!(
                "contour offset must be positive, got {}",
                self.offset
            )));
        }
        Ok(())
    }
}

/// Gaussian-linear exponent `α z² - β z t` (sign conventions per side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Exponent {
    pub alpha: f64,
    pub beta: f64,
}

/// Log-magnitude drop at which the line integrand is truncated.
const LINE_DROP: f64 = 45.0;

pub(crate) struct DoubleContour {
    roots: Vec<(f64, i32)>,
    degree: f64,
    row: Exponent,
    col: Exponent,
    center: f64,
    radius: f64,
    /// Preferred line abscissa at the edge, if the edge geometry is active.
    edge_line: Option<f64>,
    margin: f64,
    circle: Vec<C64>,
    circle_weights: Vec<C64>,
    /// `-log P(v_p)` on the circle.
    circle_logp: Vec<C64>,
    opts: ContourOptions,
}

fn group_roots(roots: &[f64]) -> Vec<(f64, i32)> {
    let mut sorted = roots.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, i32)> = Vec::new();
    for r in sorted {
        match out.last_mut() {
            Some((v, m)) if *v == r => *m += 1,
            _ => out.push((r, 1)),
        }
    }
    out
}

impl DoubleContour {
    pub fn new(roots: &[f64], row: Exponent, col: Exponent, opts: ContourOptions) -> Result<Self> {
        opts.validate()?;
        if roots.is_empty() {
            return Err(Error::Config("contour kernel needs at least one root".into()));
        }
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::Domain("source entries must be finite".into()));
        }
        let grouped = group_roots(roots);
        let n = roots.len() as f64;
        let lo = grouped.first().unwrap().0;
        let hi = grouped.last().unwrap().0;
        let h = opts.offset;

        let (center, radius, margin, edge_line) = if roots.len() >= opts.edge_threshold {
            let shrink = n.powf(-1.0 / 3.0);
            let col_scale = (n / (2.0 * col.alpha)).sqrt();
            let row_scale = (n / (2.0 * row.alpha)).sqrt();
            let reach = lo.abs().max(hi.abs()) + h;
            let radius = (col_scale * (1.0 + 0.5 * shrink)).max(reach);
            let margin = h.max(0.5 * col_scale * shrink);
            let line = (row_scale * (1.0 + 1.5 * shrink)).max(radius + margin);
            (0.0, radius, margin, Some(line))
        } else {
            (0.5 * (lo + hi), 0.5 * (hi - lo) + h, h, None)
        };

        let p = opts.circle_points;
        let mut circle = Vec::with_capacity(p);
        let mut circle_weights = Vec::with_capacity(p);
        for k in 0..p {
            let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64);
            circle.push(center + radius * e);
            circle_weights.push(radius * e / p as f64);
        }
        let mut dc = Self {
            roots: grouped,
            degree: n,
            row,
            col,
            center,
            radius,
            edge_line,
            margin,
            circle,
            circle_weights,
            circle_logp: Vec::new(),
            opts,
        };
        dc.circle_logp = dc.circle.iter().map(|&v| -dc.log_poly(v)).collect();
        Ok(dc)
    }

    fn log_poly(&self, z: C64) -> C64 {
        self.roots
            .iter()
            .map(|&(r, m)| (z - r).ln() * m as f64)
            .sum()
    }

    /// Abscissa of the vertical line used for row position `x`.
    fn line_abscissa(&self, x: f64) -> f64 {
        let left = self.center - self.radius - self.margin;
        let right = self.center + self.radius + self.margin;
        match self.opts.line_side {
            LineSide::Left => return left.min(self.saddle(x)),
            LineSide::Right => return right.max(self.saddle(x)),
            LineSide::Auto => {}
        }
        if let Some(line) = self.edge_line {
            // Near the edge the saddle is at most `line`; farther right follow it.
            return self.saddle(x).max(line);
        }
        let a = self.saddle(x);
        if a > left && a < right {
            // inside the exclusion band: push to the nearer side
            if a - self.center >= 0.0 {
                right
            } else {
                left
            }
        } else {
            a
        }
    }

    /// Real part of the dominant saddle of `u^N e^{α u² - β u x}`.
    fn saddle(&self, x: f64) -> f64 {
        let Exponent { alpha, beta } = self.row;
        let disc = beta * beta * x * x - 8.0 * alpha * self.degree;
        if disc > 0.0 {
            (beta * x + x.signum() * disc.sqrt()) / (4.0 * alpha)
        } else {
            beta * x / (4.0 * alpha)
        }
    }

    /// Composite Gauss–Legendre rule on `s ∈ [-T, T]` for the line `Re u = a`,
    /// graded with the distance to the circle. Returns nodes `u` and weights
    /// including the `1/2π`.
    fn line_rule(&self, a: f64, x: f64) -> Result<(Vec<C64>, Vec<f64>)> {
        let Exponent { alpha, beta } = self.row;
        let logmag = |s: f64| {
            let u = C64::new(a, s);
            self.log_poly(u).re + alpha * (a * a - s * s) - beta * a * x
        };
        let gap = (a - self.center).abs() - self.radius;
        if gap <= 0.0 {
            return Err(Error::Config(format!(
                "vertical line Re u = {a} intersects the circle of radius {} about {}",
                self.radius, self.center
            )));
        }
        let mut peak = logmag(0.0);
        let mut s = 0.0;
        let step = 0.05 * (1.0 / alpha.sqrt()).min(1.0);
        let mut end = None;
        while s < 400.0 {
            s += step;
            let l = logmag(s);
            peak = peak.max(l);
            if s > 1.0 && l < peak - LINE_DROP {
                end = Some(s);
                break;
            }
        }
        let end = end.ok_or_else(|| {
            Error::Numeric(format!("line integrand on Re u = {a} does not decay"))
        })?;

        let reference = gauss_legendre(self.opts.line_order, -1.0, 1.0)?;
        let mut bounds = vec![0.0];
        let mut b = 0.0;
        while b < end {
            let dist = (gap * gap + b * b).sqrt();
            let width = (0.5 * dist).clamp(0.05, 1.0);
            b = (b + width).min(end);
            bounds.push(b);
        }
        let mut nodes = Vec::with_capacity(2 * bounds.len() * reference.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in bounds.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (t, w) in reference.iter() {
                let s = mid + half * t;
                for sign in [1.0, -1.0] {
                    nodes.push(C64::new(a, sign * s));
                    weights.push(half * w / (2.0 * PI));
                }
            }
        }
        Ok((nodes, weights))
    }

    /// Matrix `exp(row_log[i] + col_log[j]) · J(xs[i], ys[j])`.
    ///
    /// `row_log` and `col_log` carry prefactors and conjugation weights so the
    /// product is formed without intermediate overflow.
    pub fn matrix(
        &self,
        xs: &[f64],
        ys: &[f64],
        row_log: &[f64],
        col_log: &[f64],
    ) -> Result<DMatrix<f64>> {
        let p = self.circle.len();
        // column factors, shifted by their maxima
        let mut col_shift = vec![0.0; ys.len()];
        let mut b = DMatrix::<C64>::zeros(p, ys.len());
        for (j, &y) in ys.iter().enumerate() {
            let logs: Vec<C64> = self
                .circle
                .iter()
                .zip(&self.circle_logp)
                .map(|(&v, &lp)| lp - self.col.alpha * v * v + self.col.beta * v * y)
                .collect();
            let m = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
            col_shift[j] = m;
            for k in 0..p {
                b[(k, j)] = (logs[k] - m).exp() * self.circle_weights[k];
            }
        }

        let mut out = DMatrix::<f64>::zeros(xs.len(), ys.len());
        let mut r = vec![C64::new(0.0, 0.0); p];
        for (i, &x) in xs.iter().enumerate() {
            let a = self.line_abscissa(x);
            let (nodes, weights) = self.line_rule(a, x)?;
            let logs: Vec<C64> = nodes
                .iter()
                .map(|&u| self.log_poly(u) + self.row.alpha * u * u - self.row.beta * u * x)
                .collect();
            let m = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
            let amp: Vec<C64> = logs
                .iter()
                .zip(&weights)
                .map(|(l, &w)| (l - m).exp() * w)
                .collect();
            r.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for (q, &u) in nodes.iter().enumerate() {
                let aq = amp[q];
                if aq.norm_sqr() < 1e-40 {
                    continue;
                }
                for (k, &v) in self.circle.iter().enumerate() {
                    r[k] += aq / (u - v);
                }
            }
            for j in 0..ys.len() {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..p {
                    acc += r[k] * b[(k, j)];
                }
                let scale = m + col_shift[j] + row_log[i] + col_log[j];
                out[(i, j)] = acc.re * scale.exp();
            }
        }
        Ok(out)
    }
}
