//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line to
//! stderr (bypassing output capture) and then asserts.

use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use kpzlab::fredholm::{det_multi, dist_f2, dist_finite_n, dist_goe2, dist_transition, DeterminantProblem};
use kpzlab::kernels::{k2, k_transition, mh_first, mh_second, ExtendedKernel, SourceSpec, SpaceTimePoint};
use kpzlab::rmt::sample_source_matrix;
use kpzlab::rng::{par_samples, stream_rng};
use kpzlab::special::quadrature::composite_gauss_legendre;
use kpzlab::special::{airy_ai, airy_ai_prime};
use kpzlab::stats::{empirical_cdf, ks_distance, TabulatedCdf};
use kpzlab_cli::{run_experiment, Experiment, ExperimentConfig, Reference};
use rand::Rng;

fn report(id: u32, pass: bool, detail: &str, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {id:>2}: {verdict}  {detail}  [{:.1}s]\n",
        elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

/// Records the verdict, then fails the test if needed.
fn conclude(id: u32, pass: bool, detail: String, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let detail = if in_time {
        detail
    } else {
        format!("{detail}; over the {}s budget", limit.as_secs())
    };
    report(id, pass && in_time, &detail, elapsed);
    assert!(pass && in_time, "criterion {id}: {detail}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn sampled(experiment: Experiment, pairs: &[(&str, &str)]) -> Vec<f64> {
    let cfg = ExperimentConfig::from_pairs(experiment, pairs).unwrap();
    run_experiment(&cfg).unwrap().table.column_f64("x").unwrap()
}

fn ks_against(xs: Vec<f64>, reference: &TabulatedCdf) -> f64 {
    ks_distance(&empirical_cdf(xs).unwrap(), |x| reference.eval(x))
}

fn tabulated(r: Reference) -> TabulatedCdf {
    r.tabulate(kpzlab::fredholm::DEFAULT_QUAD_ORDER, 1).unwrap()
}

#[test]
fn criterion_01_airy_kernel_identity() {
    let start = Instant::now();
    // Christoffel–Darboux form, with the diagonal limit Ai'² - x Ai²
    let cd = |x: f64, y: f64| {
        let (a, ap) = (airy_ai(x).unwrap(), airy_ai_prime(x).unwrap());
        let (b, bp) = (airy_ai(y).unwrap(), airy_ai_prime(y).unwrap());
        if x == y {
            ap * ap - x * a * a
        } else {
            (a * bp - ap * b) / (x - y)
        }
    };
    let grid: Vec<f64> = (0..9).map(|i| -3.0 + 5.0 * i as f64 / 8.0).collect();
    let mut worst: f64 = 0.0;
    for &x in &grid {
        for &y in &grid {
            worst = worst.max((k2(x, y).unwrap() - cd(x, y)).abs());
        }
    }
    conclude(1, worst < 1e-8, format!("max |K2 - CD| = {worst:.2e} (tol 1e-8)"), start, secs(5));
}

#[test]
fn criterion_02_biorthogonality() {
    let start = Instant::now();
    let rule = composite_gauss_legendre(40, 12, -15.0, 15.0).unwrap();
    let mut rng = stream_rng(2024, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let eps: Vec<f64> = (0..7).map(|_| rng.random_range(-1.5..1.5)).collect();
        let src = SourceSpec::new(eps).unwrap();
        for j in 0..=6 {
            let fj: Vec<f64> = rule.nodes.iter().map(|&x| mh_first(j, &src, x).unwrap()).collect();
            let norm = std::f64::consts::PI.sqrt()
                * 2f64.powi(j as i32)
                * (1..=j).map(|i| i as f64).product::<f64>();
            for k in 0..=6 {
                let v: f64 = rule
                    .iter()
                    .zip(&fj)
                    .map(|((x, w), f)| w * f * mh_second(k, &src, x).unwrap() * (-x * x).exp())
                    .sum();
                let want = if j == k { norm } else { 0.0 };
                worst = worst.max((v - want).abs() / norm);
            }
        }
    }
    conclude(2, worst < 1e-8, format!("max relative defect = {worst:.2e} (tol 1e-8)"), start, secs(10));
}

#[test]
fn criterion_03_finite_n_exactness() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for eps in [0.0, 1.2] {
        let src = SourceSpec::new(vec![eps]).unwrap();
        for i in 0..=70 {
            let s = -3.0 + 0.1 * i as f64;
            let want = 0.5 * (1.0 + libm::erf(s - eps));
            worst = worst.max((dist_finite_n(s, &src).unwrap() - want).abs());
        }
    }
    let src = SourceSpec::from_lambda(4, 1.0).unwrap();
    let samples = par_samples(3, 100_000, 1, |_, rng| {
        sample_source_matrix(4, &src, rng)?.largest_eigenvalue()
    })
    .unwrap();
    let cdf = TabulatedCdf::from_fn(-1.0, 7.0, 400, |s| dist_finite_n(s, &src)).unwrap();
    let ks = ks_against(samples, &cdf);
    let pass = worst < 1e-6 && ks < 0.01;
    conclude(
        3,
        pass,
        format!("N=1 max error {worst:.2e} (tol 1e-6); N=4 KS {ks:.4} (tol 0.01)"),
        start,
        secs(180),
    );
}

#[test]
fn criterion_04_static_transition() {
    let start = Instant::now();
    let base = [("N", "500"), ("samples", "20000"), ("seed", "4")];
    let run = |lambda: &str| {
        let mut p = base.to_vec();
        p.push(("Lambda", lambda));
        sampled(Experiment::RmtEdge, &p)
    };
    let ks_f2 = ks_against(run("0.5"), &tabulated(Reference::F2));
    let ks_goe2 = ks_against(run("1"), &tabulated(Reference::Goe2));
    let ks_normal = ks_against(run("1.5"), &tabulated(Reference::Normal));
    let pass = ks_f2 < 0.07 && ks_goe2 < 0.07 && ks_normal < 0.05;
    conclude(
        4,
        pass,
        format!(
            "KS Lambda=0.5 vs F2 {ks_f2:.4} (0.07), Lambda=1 vs GOE2 {ks_goe2:.4} (0.07), Lambda=1.5 vs normal {ks_normal:.4} (0.05)"
        ),
        start,
        secs(600),
    );
}

#[test]
fn criterion_05_max_of_two_goe() {
    let start = Instant::now();
    let xs = sampled(
        Experiment::RmtEdge,
        &[("ensemble", "goe2"), ("N", "400"), ("samples", "20000"), ("seed", "5")],
    );
    let ks = ks_against(xs, &tabulated(Reference::Goe2));
    conclude(5, ks < 0.05, format!("KS vs GOE2 {ks:.4} (tol 0.05)"), start, secs(300));
}

#[test]
fn criterion_06_png_transition() {
    let start = Instant::now();
    let run = |alpha: &str| {
        sampled(
            Experiment::PngHeight,
            &[("q", "0.25"), ("alpha", alpha), ("N", "256"), ("samples", "20000"), ("seed", "6")],
        )
    };
    let ks_f2 = ks_against(run("0.9"), &tabulated(Reference::F2));
    let ks_goe2 = ks_against(run("1.0"), &tabulated(Reference::Goe2));
    let ks_normal = ks_against(run("1.5"), &tabulated(Reference::Normal));
    let pass = ks_f2 < 0.1 && ks_goe2 < 0.1 && ks_normal < 0.05;
    conclude(
        6,
        pass,
        format!(
            "KS alpha=0.9 vs F2 {ks_f2:.4} (0.1), alpha=1 vs GOE2 {ks_goe2:.4} (0.1), alpha=1.5 vs normal {ks_normal:.4} (0.05)"
        ),
        start,
        secs(900),
    );
}

#[test]
fn criterion_07_transition_kernel_limits() {
    let start = Instant::now();
    let (mut at_zero, mut at_large): (f64, f64) = (0.0, 0.0);
    for i in 0..=24 {
        let s = -4.0 + 0.25 * i as f64;
        at_zero = at_zero.max((dist_transition(s, 0.0, 0.0).unwrap() - dist_goe2(s).unwrap()).abs());
        at_large = at_large.max((dist_transition(s, 25.0, 0.0).unwrap() - dist_f2(s).unwrap()).abs());
    }
    let pass = at_zero < 1e-9 && at_large < 1e-5;
    conclude(
        7,
        pass,
        format!("omega=0 vs GOE2 {at_zero:.2e} (tol 1e-9); omega=25 vs F2 {at_large:.2e} (tol 1e-5)"),
        start,
        secs(120),
    );
}

#[test]
fn criterion_08_multi_time_factorization() {
    let start = Instant::now();
    let kernel = ExtendedKernel::transition(0.0).unwrap();
    let (t1, t2) = (0.0, 8.0);
    let joint = det_multi(&DeterminantProblem::new(kernel, vec![t1, t2], vec![0.0, 0.0]).unwrap()).unwrap();
    let product = dist_transition(0.0, 0.0, t1).unwrap() * dist_transition(0.0, 0.0, t2).unwrap();
    let diff = (joint - product).abs();
    conclude(8, diff < 1e-3, format!("|joint - product| = {diff:.2e} (tol 1e-3)"), start, secs(120));
}

#[test]
fn criterion_09_dynamical_oracle_equivalence() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let chain = ExperimentConfig::from_pairs(
        Experiment::RmtDyson,
        &[("N", "2"), ("times", "0,0.7"), ("eps", "1,0"), ("samples", "100000"), ("seed", "9")],
    )
    .unwrap();
    std::fs::write(out("chain.csv"), run_experiment(&chain).unwrap().to_csv().unwrap()).unwrap();
    let joint = ExperimentConfig::from_pairs(
        Experiment::DistJoint,
        &[("which", "finite-n"), ("times", "0,0.7"), ("eps", "1,0"), ("s-grid", "-0.5:2.5:0.75")],
    )
    .unwrap();
    std::fs::write(out("joint.csv"), run_experiment(&joint).unwrap().to_csv().unwrap()).unwrap();
    let cmp = ExperimentConfig::from_pairs(
        Experiment::Compare,
        &[("input", &out("chain.csv")), ("against", "joint"), ("reference", &out("joint.csv"))],
    )
    .unwrap();
    let rep = run_experiment(&cmp).unwrap();
    let sup = rep.summary["sup_difference"].as_f64().unwrap();
    let points = rep.table.rows[0][2].as_f64().unwrap();
    conclude(
        9,
        sup < 0.015 && points == 25.0,
        format!("sup difference {sup:.4} over {points} thresholds (tol 0.015)"),
        start,
        secs(600),
    );
}

#[test]
fn criterion_10_edge_scaled_dynamical_kernel() {
    let start = Instant::now();
    let n = 600;
    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let k = ExtendedKernel::finite_dynamical(SourceSpec::from_omega(n, 0.0).unwrap(), vec![0.0])
        .unwrap()
        .edge_scaled();
    let m = k.block(0.0, &grid, 0.0, &grid).unwrap();
    let mut worst: f64 = 0.0;
    for (i, &x) in grid.iter().enumerate() {
        for (j, &y) in grid.iter().enumerate() {
            let lim = k_transition(SpaceTimePoint::new(0.0, x), SpaceTimePoint::new(0.0, y), 0.0).unwrap();
            worst = worst.max((m[(i, j)] - lim).abs());
        }
    }
    conclude(10, worst < 0.05, format!("max discrepancy {worst:.4} (tol 0.05)"), start, secs(300));
}

fn run_binary(args: &[&str], out: &Path, workers: usize) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_kpzlab"))
        .args(args)
        .arg("--workers")
        .arg(workers.to_string())
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn criterion_11_worker_count_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["png-height", "--alpha", "1.0", "--N", "48", "--samples", "300", "--seed", "11", "--tau", "-0.5,0,0.5"],
        &["rmt-edge", "--N", "60", "--Lambda", "0.8", "--samples", "500", "--method", "dense", "--seed", "11"],
        &["rmt-dyson", "--N", "3", "--times", "0,0.3,0.9", "--eps", "1,0,-1", "--samples", "2000", "--seed", "11", "--format", "json"],
        &["png-layers", "--alpha", "1.2", "--N", "20", "--samples", "6", "--layers", "4", "--seed", "11"],
    ];
    let mut identical = true;
    for (i, args) in runs.iter().enumerate() {
        let a = run_binary(args, &dir.path().join(format!("{i}-a")), 1);
        let b = run_binary(args, &dir.path().join(format!("{i}-b")), 4);
        let c = run_binary(args, &dir.path().join(format!("{i}-c")), 3);
        identical &= !a.is_empty() && a == b && a == c;
    }
    conclude(
        11,
        identical,
        format!("{} experiments byte-identical across 1, 3 and 4 workers: {identical}", runs.len()),
        start,
        secs(60),
    );
}
