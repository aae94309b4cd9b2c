//! Multiple Hermite functions `F_{k,ε}` and `G_{k,ε}`, the biorthogonal
//! families behind the finite-N dynamical kernel.
//!
//! Both use the rescaled source `ε'_l = ε_l / sqrt 2` and satisfy
//! `∫ F_j(x) G_k(x) e^{-x²} dx = sqrt(π) 2^j j! δ_jk`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;

use super::SourceSpec;
use crate::error::{ensure_finite, Error, Result};
use crate::special::quadrature::gauss_hermite_prob;

/// Pole separation below which residues are replaced by circle quadrature.
const CONFLUENT_GAP: f64 = 0.5;
const CIRCLE_POINTS: usize = 128;

fn check(k: usize, src: &SourceSpec, x: f64) -> Result<()> {
    ensure_finite("multiple Hermite argument", x)?;
    if k >= src.n() {
        return Err(Error::Domain(format!(
            "multiple Hermite index {k} out of range for N = {}",
            src.n()
        )));
    }
    Ok(())
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

/// `F_k(x) = k! 2^{k/2} ∮ dz/(2πi) e^{-z²/2 + sqrt2 z x} / Π_{l ≤ k+1} (z - ε'_l)`.
///
/// Distinct, well-separated poles are summed by residues; clustered poles
/// (for instance the repeated zeros of a rank-one source) by the trapezoid
/// rule on a circle around the cluster.
pub fn mh_first(k: usize, src: &SourceSpec, x: f64) -> Result<f64> {
    check(k, src, x)?;
    let poles: Vec<f64> = src.epsilons()[..=k].iter().map(|e| e / SQRT_2).collect();
    let scale = (ln_factorial(k) + 0.5 * k as f64 * std::f64::consts::LN_2).exp();
    let f = |z: C64| (-0.5 * z * z + SQRT_2 * z * x).exp();

    let mut sorted = poles.clone();
    sorted.sort_by(f64::total_cmp);
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    if min_gap > CONFLUENT_GAP {
        let mut sum = 0.0;
        for (l, &p) in poles.iter().enumerate() {
            let denom: f64 = poles
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != l)
                .map(|(_, &q)| p - q)
                .product();
            sum += f(C64::new(p, 0.0)).re / denom;
        }
        return Ok(scale * sum);
    }

    let center = poles.iter().sum::<f64>() / poles.len() as f64;
    let spread = sorted.last().unwrap() - sorted.first().unwrap();
    let radius = spread + 1.0;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..CIRCLE_POINTS {
        let e = C64::from_polar(1.0, 2.0 * PI * j as f64 / CIRCLE_POINTS as f64);
        let z = center + radius * e;
        let denom: C64 = poles.iter().map(|&p| z - p).product();
        acc += f(z) / denom * radius * e;
    }
    Ok(scale * acc.re / CIRCLE_POINTS as f64)
}

/// `G_k(x) = 2^{k/2} / sqrt(2π) ∫ e^{-s²/2} Π_{l ≤ k} (sqrt2 x - ε'_l + is) ds`,
/// the vertical-line integral after completing the square. It is a real
/// polynomial of degree `k` in `x`, integrated exactly by Gauss–Hermite.
pub fn mh_second(k: usize, src: &SourceSpec, x: f64) -> Result<f64> {
    check(k, src, x)?;
    let roots: Vec<f64> = src.epsilons()[..k].iter().map(|e| e / SQRT_2).collect();
    let rule = gauss_hermite_prob(k / 2 + 1)?;
    let mut acc = 0.0;
    for (s, w) in rule.iter() {
        let p: C64 = roots
            .iter()
            .map(|&e| C64::new(SQRT_2 * x - e, s))
            .product();
        acc += w * p.re;
    }
    Ok(2f64.powf(0.5 * k as f64) * acc / (2.0 * PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quadrature::composite_gauss_legendre;
    use proptest::prelude::*;

    /// Physicists' Hermite polynomials by recurrence.
    fn hermite(k: usize, x: f64) -> f64 {
        let (mut h0, mut h1) = (1.0, 2.0 * x);
        if k == 0 {
            return h0;
        }
        for j in 1..k {
            let h2 = 2.0 * x * h1 - 2.0 * j as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        h1
    }

    #[test]
    fn lowest_index() {
        let src = SourceSpec::new(vec![0.8, -0.3]).unwrap();
        let p = 0.8 / SQRT_2;
        for x in [-1.0, 0.0, 2.0] {
            let want = (-0.5 * p * p + SQRT_2 * p * x).exp();
            assert!((mh_first(0, &src, x).unwrap() - want).abs() < 1e-13);
            assert!((mh_second(0, &src, x).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(mh_first(2, &src, 0.0).is_err());
        assert!(mh_second(2, &src, 0.0).is_err());
    }

    #[test]
    fn zero_source_gives_hermite_polynomials() {
        let src = SourceSpec::zero(7).unwrap();
        for k in 0..7 {
            for x in [-1.3, 0.0, 0.4, 1.0, 2.2] {
                let h = hermite(k, x);
                let tol = 1e-10 * (1.0 + h.abs());
                assert!((mh_first(k, &src, x).unwrap() - h).abs() < tol, "F k={k} x={x}");
                assert!((mh_second(k, &src, x).unwrap() - h).abs() < tol, "G k={k} x={x}");
            }
        }
    }

    #[test]
    fn first_family_is_exponential_combination() {
        // F_2 = Σ c_l e^{sqrt2 ε'_l x}: fit on three points, predict a fourth
        let src = SourceSpec::new(vec![1.5, 0.0, -1.2]).unwrap();
        let rates: Vec<f64> = src.epsilons().iter().map(|e| e / SQRT_2 * SQRT_2).collect();
        let xs = [-0.5, 0.3, 1.1];
        let a = nalgebra::Matrix3::from_fn(|i, j| (rates[j] * xs[i]).exp());
        let b = nalgebra::Vector3::from_fn(|i, _| mh_first(2, &src, xs[i]).unwrap());
        let c = a.lu().solve(&b).unwrap();
        let x = 1.9;
        let pred: f64 = (0..3).map(|j| c[j] * (rates[j] * x).exp()).sum();
        assert!((pred - mh_first(2, &src, x).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn second_family_is_polynomial() {
        let src = SourceSpec::new(vec![0.4, -0.9, 0.1, 0.7]).unwrap();
        let k = 3;
        let h = 0.3;
        // fourth forward difference of a cubic vanishes
        let coef = [1.0, -4.0, 6.0, -4.0, 1.0];
        let d: f64 = coef
            .iter()
            .enumerate()
            .map(|(i, c)| c * mh_second(k, &src, -0.6 + h * i as f64).unwrap())
            .sum();
        assert!(d.abs() < 1e-8);
    }

    fn biorthogonality_defect(eps: Vec<f64>) -> f64 {
        let src = SourceSpec::new(eps).unwrap();
        let n = src.n();
        let rule = composite_gauss_legendre(40, 12, -15.0, 15.0).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let fj: Vec<f64> = rule.nodes.iter().map(|&x| mh_first(j, &src, x).unwrap()).collect();
            let norm = PI.sqrt() * 2f64.powi(j as i32) * ln_factorial(j).exp();
            for k in 0..n {
                let v: f64 = rule
                    .iter()
                    .zip(&fj)
                    .map(|((x, w), f)| w * f * mh_second(k, &src, x).unwrap() * (-x * x).exp())
                    .sum();
                let want = if j == k { norm } else { 0.0 };
                worst = worst.max((v - want).abs() / norm);
            }
        }
        worst
    }

    #[test]
    fn biorthogonality_fixed_sources() {
        assert!(biorthogonality_defect(vec![0.0; 7]) < 1e-10);
        assert!(biorthogonality_defect(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]) < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]
        #[test]
        fn biorthogonality_random_sources(eps in prop::collection::vec(-1.0f64..1.0, 7)) {
            prop_assert!(biorthogonality_defect(eps) < 1e-8);
        }
    }
}
