use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;

/// Where a [`Quadrature`] rule lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Finite interval `[a, b]`.
    Interval { a: f64, b: f64 },
    /// Truncation `[start, start + length]` of a semi-infinite range.
    Truncated { start: f64, length: f64 },
    /// Whole real line with a Gaussian weight already folded into the weights.
    RealLine,
}

/// Nodes and positive weights of a real quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    // (P_n(z), P_{n-1}(z)) by the three-term recurrence
    let legendre = |z: f64| {
        let (mut p0, mut p1) = (1.0, z);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        (p1, p0)
    };
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, pm) = legendre(z);
            let dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (pn, pm) = legendre(z);
        let dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `n`-point Gauss–Legendre rule on `[a, b]`, exact for polynomials of degree
/// `2n - 1`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Quadrature> {
    if n == 0 {
        return Err(Error::Domain("Gauss-Legendre rule needs n >= 1".into()));
    }
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Domain(format!(
            "Gauss-Legendre interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let (x, w) = legendre_reference(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(Quadrature {
        nodes: x.iter().map(|t| mid + half * t).collect(),
        weights: w.iter().map(|v| half * v).collect(),
        domain: Domain::Interval { a, b },
    })
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` points each.
pub fn composite_gauss_legendre(order: usize, panels: usize, a: f64, b: f64) -> Result<Quadrature> {
    if panels == 0 {
        return Err(Error::Domain("composite rule needs at least one panel".into()));
    }
    let reference = gauss_legendre(order, -1.0, 1.0)?;
    if a >= b {
        return Err(Error::Domain(format!("interval [{a}, {b}] is empty")));
    }
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(order * panels);
    let mut weights = Vec::with_capacity(order * panels);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        for (t, w) in reference.iter() {
            nodes.push(mid + 0.5 * width * t);
            weights.push(0.5 * width * w);
        }
    }
    Ok(Quadrature {
        nodes,
        weights,
        domain: Domain::Interval { a, b },
    })
}

/// Composite Gauss–Legendre on the truncation `[start, start + length]`.
pub fn truncated_gauss_legendre(
    order: usize,
    panels: usize,
    start: f64,
    length: f64,
) -> Result<Quadrature> {
    let mut q = composite_gauss_legendre(order, panels, start, start + length)?;
    q.domain = Domain::Truncated { start, length };
    Ok(q)
}

/// Gauss–Hermite rule for the weight `exp(-x²/2)` on the real line
/// (Golub–Welsch). Weights sum to `sqrt(2π)`.
pub fn gauss_hermite_prob(n: usize) -> Result<Quadrature> {
    if n == 0 {
        return Err(Error::Domain("Gauss-Hermite rule needs n >= 1".into()));
    }
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let (nodes, vecs) = tridiagonal_eigen(&vec![0.0; n], &off, true)?;
    let vecs = vecs.expect("vectors requested");
    let mass = (2.0 * PI).sqrt();
    let weights = (0..n).map(|k| mass * vecs[(0, k)].powi(2)).collect();
    Ok(Quadrature {
        nodes,
        weights,
        domain: Domain::RealLine,
    })
}
