//! Distribution functions at the default Nyström parameters.

use super::{det_multi, det_single, DeterminantProblem, DEFAULT_CUTOFF, DEFAULT_QUAD_ORDER};
use crate::error::{ensure_finite, Error, Result};
use crate::kernels::{ExtendedKernel, SourceSpec};

/// GUE Tracy–Widom distribution `F2(s)`.
pub fn dist_f2(s: f64) -> Result<f64> {
    det_single(&ExtendedKernel::airy(), s, DEFAULT_QUAD_ORDER, DEFAULT_CUTOFF)
}

/// `F1(s)²`, the law of the larger of two independent GOE edges.
pub fn dist_goe2(s: f64) -> Result<f64> {
    det_single(&ExtendedKernel::goe2(), s, DEFAULT_QUAD_ORDER, DEFAULT_CUTOFF)
}

/// One-point law of the GOE²–GUE transition kernel with parameter `ω` at
/// scaled time `τ`. Requires `ω + τ ≥ 0`.
pub fn dist_transition(s: f64, omega: f64, tau: f64) -> Result<f64> {
    ensure_finite("omega", omega)?;
    ensure_finite("tau", tau)?;
    if omega + tau < 0.0 {
        return Err(Error::Domain(format!(
            "transition kernel diverges for omega + tau = {} < 0",
            omega + tau
        )));
    }
    let p = DeterminantProblem::new(ExtendedKernel::transition(omega)?, vec![tau], vec![s])?;
    det_multi(&p)
}

/// Exact largest-eigenvalue CDF `P[λ_max ≤ s]` of `H + V` with
/// `H ~ e^{-tr H²}` and `V = diag(ε)`, in unscaled units.
pub fn dist_finite_n(s: f64, src: &SourceSpec) -> Result<f64> {
    det_single(
        &ExtendedKernel::finite_static(src.clone()),
        s,
        DEFAULT_QUAD_ORDER,
        DEFAULT_CUTOFF,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::airy::tail;

    #[test]
    fn tracy_widom_reference_values() {
        // tabulated values F2(-2) = 0.413224, F2(0) = 0.969373
        assert!((dist_f2(-2.0).unwrap() - 0.413_224).abs() < 1e-5);
        assert!((dist_f2(0.0).unwrap() - 0.969_373).abs() < 1e-5);
    }

    #[test]
    fn tails_and_monotonicity() {
        let v: Vec<f64> = [-1.0, 0.0, 1.0].iter().map(|&s| dist_f2(s).unwrap()).collect();
        assert!(v[0] < v[1] && v[1] < v[2]);
        assert!(dist_f2(-8.0).unwrap() < 1e-3);
        assert!(dist_f2(4.0).unwrap() > 1.0 - 1e-4);
        for s in [-4.0, -2.0, 0.0, 2.0] {
            let (f2, g) = (dist_f2(s).unwrap(), dist_goe2(s).unwrap());
            assert!((0.0..=1.0).contains(&g) && g <= f2 + 0.2);
        }
        assert!((dist_goe2(20.0).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn goe_squared_far_right_tail() {
        // 1 - F1(s)² ≈ 2(1 - F1(s)) ≈ ∫_s^∞ Ai for large s
        let s = 5.0;
        let g = dist_goe2(s).unwrap();
        assert!(((1.0 - g) / tail(s) - 1.0).abs() < 0.05);
    }

    #[test]
    fn transition_endpoints() {
        for s in [-3.0, -1.0, 0.5] {
            let t = dist_transition(s, 0.0, 0.0).unwrap();
            assert!((t - dist_goe2(s).unwrap()).abs() < 1e-9);
        }
        let f2 = dist_f2(0.0).unwrap();
        let mut prev = 0.0;
        for omega in [0.0, 1.0, 5.0, 25.0] {
            let v = dist_transition(0.0, omega, 0.0).unwrap();
            assert!(v >= prev - 1e-12 && v <= f2 + 1e-9);
            prev = v;
        }
        // the approach to F2 is O(1/ω)
        let gap25 = (dist_transition(-1.0, 25.0, 0.0).unwrap() - dist_f2(-1.0).unwrap()).abs();
        let gap50 = (dist_transition(-1.0, 50.0, 0.0).unwrap() - dist_f2(-1.0).unwrap()).abs();
        assert!(gap50 < 0.6 * gap25);
        assert!(matches!(dist_transition(0.0, -1.0, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn single_particle_is_gaussian() {
        for eps in [0.0, 1.2] {
            let src = SourceSpec::new(vec![eps]).unwrap();
            for i in 0..15 {
                let s = -3.0 + 0.5 * i as f64;
                let want = 0.5 * (1.0 + libm::erf(s - eps));
                assert!((dist_finite_n(s, &src).unwrap() - want).abs() < 1e-6);
            }
        }
    }
}
