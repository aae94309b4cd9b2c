//! Single-layer discrete PNG droplet.

use rand::Rng;

use super::PngParams;
use crate::rng::stream_rng;

/// Heights `h(r, t)` for `r ∈ [-t, t]`; zero outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightField {
    t: usize,
    h: Vec<i64>,
}

impl HeightField {
    /// The flat droplet at `t = 0`.
    pub fn initial() -> Self {
        Self { t: 0, h: vec![0] }
    }

    /// Field at time `t` from heights on `[-t, t]` (length `2t + 1`).
    pub fn from_heights(t: usize, h: Vec<i64>) -> Option<Self> {
        (h.len() == 2 * t + 1 && h.iter().all(|&v| v >= 0)).then_some(Self { t, h })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn heights(&self) -> &[i64] {
        &self.h
    }

    /// `h(r, t)`, zero outside the stored range.
    pub fn get(&self, r: i64) -> i64 {
        let i = r + self.t as i64;
        if i < 0 || i as usize >= self.h.len() {
            0
        } else {
            self.h[i as usize]
        }
    }
}

/// Geometric parameter at `(r, t)`, or `None` where no nucleation happens
/// (`t - |r| ≤ 0` or `t - r` even).
pub fn noise_parameter(r: i64, t: i64, params: &PngParams) -> Option<f64> {
    if t - r.abs() <= 0 || (t - r).rem_euclid(2) == 0 {
        None
    } else if r == -t + 1 {
        Some(params.alpha() * params.q().sqrt())
    } else {
        Some(params.q())
    }
}

/// Inverse CDF of `P[k] = (1 - p) p^k` at `u ∈ (0, 1]`.
pub fn geometric_from_uniform(u: f64, p: f64) -> i64 {
    if u > p {
        // ln u / ln p < 1
        0
    } else {
        (u.ln() / p.ln()).floor() as i64
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// `ω(r, t)`. Eligible sites consume exactly one uniform, so runs at
/// different `α` with the same generator are coupled.
pub fn sample_noise<R: Rng + ?Sized>(r: i64, t: i64, params: &PngParams, rng: &mut R) -> i64 {
    match noise_parameter(r, t, params) {
        Some(p) => geometric_from_uniform(uniform(rng), p),
        None => 0,
    }
}

/// Nucleations `ω(r, t + 1)` for `r ∈ [-t-1, t+1]`.
pub fn draw_noise<R: Rng + ?Sized>(t: usize, params: &PngParams, rng: &mut R) -> Vec<i64> {
    let t1 = t as i64 + 1;
    (-t1..=t1).map(|r| sample_noise(r, t1, params, rng)).collect()
}

/// `h(r, t+1) = max(h(r-1, t), h(r, t), h(r+1, t)) + ω(r, t+1)` with the
/// given nucleations (indexed by `r + t + 1`).
pub fn evolve_with_noise(field: &HeightField, noise: &[i64]) -> HeightField {
    let t1 = field.t as i64 + 1;
    assert_eq!(noise.len(), 2 * t1 as usize + 1, "noise must cover [-t-1, t+1]");
    let h = (-t1..=t1)
        .zip(noise)
        .map(|(r, &w)| field.get(r - 1).max(field.get(r)).max(field.get(r + 1)) + w)
        .collect();
    HeightField { t: t1 as usize, h }
}

/// One growth step with fresh noise.
pub fn evolve<R: Rng + ?Sized>(field: &HeightField, params: &PngParams, rng: &mut R) -> HeightField {
    let noise = draw_noise(field.t, params, rng);
    evolve_with_noise(field, &noise)
}

/// Droplet at `t = 2N` grown from the flat state with the given generator.
pub fn run_with_rng<R: Rng + ?Sized>(params: &PngParams, rng: &mut R) -> HeightField {
    let mut f = HeightField::initial();
    for _ in 0..2 * params.n() {
        f = evolve(&f, params, rng);
        debug_assert!(f.get(f.t as i64) == 0 && f.get(-(f.t as i64)) == 0);
    }
    f
}

/// Droplet at `t = 2N` for stream 0 of `seed`.
pub fn run(params: &PngParams, seed: u64) -> HeightField {
    run_with_rng(params, &mut stream_rng(seed, 0))
}
