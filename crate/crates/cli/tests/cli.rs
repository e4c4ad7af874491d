//! End-to-end checks of the command-line contract: exit codes, stream
//! discipline, column orders, and determinism across worker counts.

use std::process::{Command, Output};

fn steerkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn concurrence_bell_state() {
    let out = steerkit(&[
        "concurrence",
        "--theta",
        "0.7854",
        "--phi",
        "0",
        "--alpha",
        "0.7854",
        "--nu1",
        "1",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"schema\":\"steerkit/1\""));
    assert!(s.contains("\"c_closed\":9.99999999"), "{s}");
}

#[test]
fn concurrence_separable_balance() {
    let out = steerkit(&[
        "concurrence",
        "--nu1",
        "0.5",
        "--phi",
        "0",
        "--alpha",
        "0.6",
        "--theta",
        "0.6",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    // c_closed indistinguishable from zero.
    assert!(
        s.contains("\"c_closed\":0.0000") || s.contains("\"c_closed\":1.") && s.contains("e-17"),
        "{s}"
    );
}

#[test]
fn out_of_range_angle_names_the_flag() {
    let out = steerkit(&["concurrence", "--theta", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty(), "data stream must stay clean");
    assert!(stderr(&out).contains("--theta"));
}

#[test]
fn malformed_flag_exits_2_without_output() {
    let out = steerkit(&["concurrence", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
}

#[test]
fn steer_csv_column_order() {
    let out = steerkit(&["steer", "--theta", "0.5", "--nu1", "0.8", "--csv"]);
    assert!(out.status.success());
    let s = stdout(&out);
    let mut lines = s.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,phi,alpha,beta,nu1,concurrence,c_lhs,w1_max,w2_max,best_w,margin,violated"
    );
    assert_eq!(lines.next().unwrap().split(',').count(), 12);
}

#[test]
fn steer_json_reports_violation() {
    let out = steerkit(&["steer", "--theta", "0.78539816339744831", "--nu1", "1"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"violated\":true"));
    assert!(s.contains("\"c_lhs\":2.50000000"), "{s}");
    assert!(s.contains("\"best_w\":5.00000000"), "{s}");
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let grid = "theta=0:1.5708:9,phi=0:1.5708:5,nu1=0.3";
    let a = steerkit(&["scan", "--grid", grid, "--jobs", "1"]);
    let b = steerkit(&["scan", "--grid", grid, "--jobs", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let s = stdout(&a);
    assert!(s.starts_with("theta,phi,alpha,beta,nu1,concurrence,c_lhs,w_max,margin,i3,verdict\n"));
    assert_eq!(s.lines().count(), 1 + 9 * 5);
}

#[test]
fn scan_rejects_malformed_grid() {
    let out = steerkit(&["scan", "--grid", "theta=0:1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = steerkit(&["scan", "--grid", "theta=0:9:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_writes_output_file_atomically() {
    let dir = std::env::temp_dir().join("steerkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let out = steerkit(&[
        "scan",
        "--grid",
        "theta=0:1:4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 5);
    assert!(!dir.join("sweep.tmp").exists());
    std::fs::remove_file(&path).ok();
}

#[test]
fn pure_sweep_margins_vanish_only_at_endpoints() {
    let out = steerkit(&["scan", "--grid", "theta=0:1.5708:25,nu1=1"]);
    let s = stdout(&out);
    for (i, line) in s.lines().skip(1).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        let margin: f64 = cols[8].parse().unwrap();
        if i == 0 || i == 24 {
            assert!(margin.abs() < 1e-9, "endpoint margin {margin}");
        } else {
            assert!(margin > 0.0, "interior point {i} margin {margin}");
        }
    }
}

#[test]
fn verify_quick_passes_with_env_seed() {
    let out = Command::new(env!("CARGO_BIN_EXE_steerkit"))
        .args(["verify", "--quick", "--n", "500"])
        .env("STEERKIT_SEED", "99")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("seed 99"));
    let s = stdout(&out);
    assert_eq!(s.matches("PASS").count(), 12, "{s}");
}

#[test]
fn schmidt_bell_amplitudes() {
    let out = steerkit(&["schmidt", "--amps", "0.7071,0;0,0;0,0;0.7071,0", "--renorm"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"kappa1\":7.07106781186548e-1"), "{s}");
    assert!(s.contains("\"kappa2\":7.07106781186548e-1"));
}

#[test]
fn schmidt_rejects_unnormalized_without_renorm() {
    let out = steerkit(&["schmidt", "--amps", "2,0;0,0;0,0;0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--renorm"));
    assert!(stdout(&out).is_empty());
}
