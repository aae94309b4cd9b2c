//! End-to-end runs of the `kpzlab` binary.

use std::path::Path;
use std::process::{Command, Output};

use kpzlab_cli::read_data_file;

fn kpzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpzlab")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dist_eval_grid_contract() {
    let o = kpzlab(&["dist-eval", "--which", "F2", "--s", "-6:3:0.05", "--workers", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert_eq!(lines.next().unwrap(), "s,F,delta");
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .collect();
    assert_eq!(rows.len(), 181);
    assert_eq!(rows[0].0, -6.0);
    assert_eq!(rows[180].0, 3.0);
    assert!(rows.windows(2).all(|w| w[1].1 >= w[0].1));
    // the summary goes to stderr when data goes to stdout
    let summary: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["rows"], 181);
    assert_eq!(summary["monotone"], true);
}

#[test]
fn written_files_round_trip_through_the_reader() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("edge.csv");
    let json = dir.path().join("edge.json");
    for (p, f) in [(&csv, "csv"), (&json, "json")] {
        let o = kpzlab(&[
            "rmt-edge", "--N", "40", "--Lambda", "0.5", "--samples", "200", "--seed", "3",
            "--format", f, "--out", path_str(p),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(summary["rows"], 200);
    }
    let a = read_data_file(&csv).unwrap();
    let b = read_data_file(&json).unwrap();
    assert_eq!(a.table, b.table);
    assert_eq!(a.metadata["experiment"], "rmt-edge");
    assert_eq!(a.metadata["config"]["Lambda"], "0.5");
    assert!(a.metadata["config"].get("out-path").is_none());
    let xs = a.table.column_f64("x").unwrap();
    let l1 = a.table.column_f64("lambda1").unwrap();
    for (x, l) in xs.iter().zip(&l1) {
        assert!((kpzlab::rmt::edge_scale(*l, 40) - x).abs() < 1e-12);
    }
}

#[test]
fn png_height_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("png.csv");
    let o = kpzlab(&[
        "png-height", "--q", "0.25", "--alpha", "1.0", "--N", "64", "--samples", "400", "--seed", "7",
        "--out", path_str(&data),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = kpzlab(&["compare", "--input", path_str(&data), "--against", "GOE2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    let ks = summary["ks"].as_f64().unwrap();
    assert!(ks > 0.0 && ks < 0.2, "ks {ks}");
    assert_eq!(summary["n"], 400);
}

#[test]
fn compare_needs_a_single_tau() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("png.csv");
    let o = kpzlab(&[
        "png-height", "--alpha", "0.9", "--N", "16", "--samples", "50", "--tau", "-0.5,0.5",
        "--out", path_str(&data),
    ]);
    assert_eq!(code(&o), 0);
    let o = kpzlab(&["compare", "--input", path_str(&data), "--against", "F2"]);
    assert_eq!(code(&o), 2);
    let o = kpzlab(&["compare", "--input", path_str(&data), "--against", "F2", "--tau", "0.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["n"], 50);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# static source\nN = 30\nLambda = 0.5\nsamples = 20\nseed = 1\n").unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(code(&kpzlab(&["rmt-edge", "--config", path_str(&cfg), "--out", path_str(&a)])), 0);
    assert_eq!(
        code(&kpzlab(&["rmt-edge", "--config", path_str(&cfg), "--Lambda", "2", "--out", path_str(&b)])),
        0
    );
    let a = read_data_file(&a).unwrap();
    let b = read_data_file(&b).unwrap();
    assert_eq!(a.metadata["config"]["Lambda"], "0.5");
    assert_eq!(b.metadata["config"]["Lambda"], "2");
    assert_eq!(b.metadata["scaling"], "gaussian");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "N = 10\nalpha = 1\n").unwrap();
    for args in [
        vec!["png-height", "--N", "8", "--samples", "4"],
        vec!["png-height", "--N", "8", "--samples", "4", "--alpha", "3"],
        vec!["dist-eval", "--which", "F3", "--s", "0"],
        vec!["dist-eval", "--which", "F2", "--s", "1:0:0.1"],
        vec!["dist-eval", "--which", "F2"],
        vec!["dist-eval", "--which", "transition", "--omega", "-1", "--s", "0"],
        vec!["rmt-edge", "--N", "10", "--samples", "5", "--workers", "0"],
        vec!["rmt-edge", "--N", "10", "--samples", "5", "--format", "xml"],
        vec!["rmt-edge", "--config", path_str(&bad), "--samples", "5"],
        vec!["rmt-dyson", "--N", "2", "--samples", "5", "--times", "0.1,0.7"],
        vec!["compare", "--input", "/nonexistent/file.csv", "--against", "F2"],
        vec!["png-height", "--bogus", "1"],
        vec!["no-such-experiment"],
    ] {
        let o = kpzlab(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn failed_certificate_exits_with_three() {
    let o = kpzlab(&["dist-eval", "--which", "F2", "--s", "-4", "--quad-order", "8"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("certificate"));
}

#[test]
fn dist_joint_finite_n_shape() {
    let o = kpzlab(&["dist-joint", "--finite-n", "--times", "0,0.7", "--eps", "1,0", "--s", "0:1:0.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "s_0,s_1,F,delta");
    assert_eq!(lines.len(), 2 + 9);
    assert!(lines[2].starts_with("0.0,0.0,"));
    // P[both ≤ s] increases in each threshold
    let f: Vec<f64> = lines[2..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    for i in 0..3 {
        for j in 0..3 {
            if i < 2 {
                assert!(f[3 * (i + 1) + j] >= f[3 * i + j]);
            }
            if j < 2 {
                assert!(f[3 * i + j + 1] >= f[3 * i + j]);
            }
        }
    }
}

#[test]
fn png_layers_table() {
    let o = kpzlab(&["png-layers", "--alpha", "1", "--N", "10", "--layers", "3", "--seed", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<i64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    // 3 layers over r in [-20, 20]
    assert_eq!(rows.len(), 3 * 41);
    for r in 0..41 {
        assert!(rows[r][3] >= rows[41 + r][3] && rows[41 + r][3] >= rows[82 + r][3]);
    }
}

#[test]
fn help_exits_cleanly() {
    let o = kpzlab(&["--help"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["png-height", "png-layers", "rmt-edge", "rmt-dyson", "dist-eval", "dist-joint", "compare"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}
