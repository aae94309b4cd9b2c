//! Empirical distribution functions and Kolmogorov–Smirnov distances.

use crate::error::{Error, Result};

/// Right-continuous empirical CDF `F̂(x) = #{x_i ≤ x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config("empirical CDF of an empty sample".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Domain("NaN in sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `F̂(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.samples.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Left limit `F̂(x⁻)`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.samples.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }
}

/// `empirical_cdf(samples)`; errors on an empty sample.
pub fn empirical_cdf(samples: Vec<f64>) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(samples)
}

/// `sup_x |F̂(x) - F(x)|`, attained at a sample point or its left limit.
/// The left limit of `F` is read one ulp below the sample, so a step `F`
/// equal to `F̂` gives distance 0.
pub fn ks_distance<F: FnMut(f64) -> f64>(ecdf: &EmpiricalCdf, mut cdf: F) -> f64 {
    let n = ecdf.len() as f64;
    let xs = ecdf.samples();
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let f_left = cdf(x.next_down());
        worst = worst.max((j as f64 / n - f).abs()).max((i as f64 / n - f_left).abs());
        i = j;
    }
    worst
}

/// Monotone piecewise-linear interpolant of tabulated CDF values, used where
/// a distribution function is too expensive to evaluate at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl TabulatedCdf {
    /// `xs` strictly increasing. Outside `[xs[0], xs[last]]` the end values
    /// are extended as constants.
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != fs.len() {
            return Err(Error::Config("tabulated CDF needs at least two matched nodes".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("tabulated CDF nodes must increase".into()));
        }
        Ok(Self { xs, fs })
    }

    /// Tabulate `f` on `[lo, hi]` with `n` equal steps.
    pub fn from_fn<F: FnMut(f64) -> Result<f64>>(lo: f64, hi: f64, n: usize, mut f: F) -> Result<Self> {
        let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let fs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::new(xs, fs)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            return self.fs[0];
        }
        if k == self.xs.len() {
            return *self.fs.last().unwrap();
        }
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let t = (x - x0) / (x1 - x0);
        self.fs[k - 1] + t * (self.fs[k] - self.fs[k - 1])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.fs
    }
}
