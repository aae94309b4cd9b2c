//! Edge-scaled finite-N kernels approach their limits.

use kpzlab::kernels::{
    k12, k2, k_transition, ExtendedKernel, SourceSpec, SpaceTimePoint,
};

const GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

#[test]
fn static_kernel_below_threshold_tends_to_airy() {
    let k = ExtendedKernel::finite_static(SourceSpec::from_lambda(800, 0.5).unwrap()).edge_scaled();
    let m = k.block(0.0, &GRID, 0.0, &GRID).unwrap();
    for (i, &x) in GRID.iter().enumerate() {
        for (j, &y) in GRID.iter().enumerate() {
            let d = (m[(i, j)] - k2(x, y).unwrap()).abs();
            assert!(d < 0.05, "({x},{y}): {d}");
        }
    }
}

#[test]
fn static_kernel_at_threshold_tends_to_k12() {
    let k = ExtendedKernel::finite_static(SourceSpec::from_lambda(800, 1.0).unwrap()).edge_scaled();
    let m = k.block(0.0, &GRID, 0.0, &GRID).unwrap();
    for (i, &x) in GRID.iter().enumerate() {
        for (j, &y) in GRID.iter().enumerate() {
            let d = (m[(i, j)] - k12(x, y).unwrap()).abs();
            assert!(d < 0.05, "({x},{y}): {d}");
        }
    }
}

#[test]
fn dynamical_kernel_tends_to_transition_kernel() {
    let n = 600;
    let taus = vec![0.0, 0.5];
    let k = ExtendedKernel::finite_dynamical(SourceSpec::from_omega(n, 0.0).unwrap(), taus.clone())
        .unwrap()
        .edge_scaled();
    for &ta in &taus {
        for &tb in &taus {
            let m = k.block(ta, &GRID, tb, &GRID).unwrap();
            for (i, &x) in GRID.iter().enumerate() {
                for (j, &y) in GRID.iter().enumerate() {
                    let want = k_transition(SpaceTimePoint::new(ta, x), SpaceTimePoint::new(tb, y), 0.0)
                        .unwrap();
                    let d = (m[(i, j)] - want).abs();
                    assert!(d < 0.05, "({ta},{x};{tb},{y}): {} vs {want}", m[(i, j)]);
                }
            }
        }
    }
}
