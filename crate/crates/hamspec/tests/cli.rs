//! End-to-end tests of the `hamspec` binary: report shapes, exit codes,
//! file round trips, and output determinism.

use num_complex::Complex64;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hamspec")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn parse_complex_list(v: &Value) -> Vec<Complex64> {
    v.as_array()
        .expect("array of complex objects")
        .iter()
        .map(|z| Complex64::new(z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap()))
        .collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const WORKED_4X4: &str = "1,2,0,1\n0,2,1,0\n1,2,-1,0\n2,0,-2,-2\n";

#[test]
fn realize_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("spec.json"),
        "[\"1+1i\", \"1-1i\", \"-1+1i\", \"-1-1i\"]",
    )
    .unwrap();

    let out = run(dir.path(), &["realize", "spec.json", "h.csv"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = stdout_json(&out);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["dimension"], 4);
    assert_eq!(report["residual"].as_f64().unwrap(), 0.0);
    assert!(report["pairing_error"].as_f64().unwrap() <= 1e-8);

    let check = run(dir.path(), &["check", "h.csv"]);
    assert!(check.status.success());
    let report = stdout_json(&check);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["hamiltonian"], true);
    assert_eq!(report["residual"].as_f64().unwrap(), 0.0);
    let odd = report["odd_charpoly_coefficients"].as_array().unwrap();
    assert!(odd.iter().all(|v| v.as_f64().unwrap() <= 1e-10));
}

#[test]
fn realize_closure_violation_names_missing_value() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spec.json"), "[\"1+1i\", \"1-1i\"]").unwrap();
    let out = run(dir.path(), &["realize", "spec.json", "h.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "error");
    assert_eq!(report["kind"], "closure");
    assert!(
        report["message"].as_str().unwrap().contains("-1-1i"),
        "message should name the missing value: {}",
        report["message"]
    );
    assert!(!dir.path().join("h.csv").exists(), "no output on failure");
}

#[test]
fn check_rejects_malformed_csv_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "1,2\n3,abc\n").unwrap();
    let out = run(dir.path(), &["check", "bad.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "error");
    assert_eq!(report["kind"], "parse");
}

#[test]
fn missing_input_file_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["realize", "nope.json", "h.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["kind"], "io");
}

#[test]
fn check_rejects_odd_dimension_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("odd.csv"), "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    let out = run(dir.path(), &["check", "odd.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["kind"], "parity");
}

#[test]
fn check_reports_identity_as_non_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("i4.csv"),
        "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n",
    )
    .unwrap();
    let out = run(dir.path(), &["check", "i4.csv"]);
    // A readable matrix that fails the structure test is a successful check.
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["hamiltonian"], false);
    // residual = ||I^T J + J I||_F = ||2 J||_F = 4 for dimension 4.
    assert!((report["residual"].as_f64().unwrap() - 4.0).abs() <= 1e-12);
}

#[test]
fn perturb_worked_example_with_explicit_eigenvectors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.csv"), WORKED_4X4).unwrap();
    std::fs::write(dir.path().join("c.csv"), "1,2\n2,-1\n").unwrap();
    let r2 = 2.0_f64.sqrt();
    let x_csv = format!(
        "{},{}\n{},{}\n{},{}\n1,1\n",
        4.0 - 3.0 * r2,
        4.0 + 3.0 * r2,
        3.5 - 2.5 * r2,
        3.5 + 2.5 * r2,
        3.0 - 2.0 * r2,
        3.0 + 2.0 * r2,
    );
    std::fs::write(dir.path().join("x.csv"), x_csv).unwrap();
    let r8 = 8.0_f64.sqrt();
    let targets = format!("{},{}", -r8, r8);

    let out = run(
        dir.path(),
        &[
            "perturb",
            "a.csv",
            "c.csv",
            "k.csv",
            "--targets",
            &targets,
            "--x-file",
            "x.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = stdout_json(&out);
    assert_eq!(report["status"], "ok");

    let s = 442.0_f64.sqrt();
    let replaced = parse_complex_list(&report["replaced"]);
    assert!(hamspec::pairing_error(&replaced, &[c(s, 0.0), c(-s, 0.0)]) <= 1e-8);
    let retained = parse_complex_list(&report["retained"]);
    assert!(hamspec::pairing_error(&retained, &[c(1.0, 0.0), c(-1.0, 0.0)]) <= 1e-8);
    assert!(report["predicted_vs_achieved"].as_f64().unwrap() <= 1e-8);

    let check = run(dir.path(), &["check", "k.csv"]);
    assert!(check.status.success());
    assert_eq!(stdout_json(&check)["hamiltonian"], true);
}

#[test]
fn perturb_with_zero_core_preserves_matrix_exactly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.csv"), WORKED_4X4).unwrap();
    std::fs::write(dir.path().join("zero.csv"), "0,0\n0,0\n").unwrap();
    let r8 = 8.0_f64.sqrt();
    let targets = format!("{},{}", -r8, r8);

    let out = run(
        dir.path(),
        &[
            "perturb",
            "a.csv",
            "zero.csv",
            "k.csv",
            "--targets",
            &targets,
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let written = std::fs::read_to_string(dir.path().join("k.csv")).unwrap();
    assert_eq!(
        written, WORKED_4X4,
        "zero update must round-trip the input bytes"
    );

    let report = stdout_json(&out);
    let replaced = parse_complex_list(&report["replaced"]);
    assert!(hamspec::pairing_error(&replaced, &[c(r8, 0.0), c(-r8, 0.0)]) <= 1e-8);
}

#[test]
fn radius_reports_bracket_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.csv"), "-1,0\n0,-2\n").unwrap();
    let first = run(dir.path(), &["radius", "a.csv", "--tol", "1e-6"]);
    assert!(first.status.success());
    let report = stdout_json(&first);
    let lower = report["alpha_lower"].as_f64().unwrap();
    let upper = report["alpha_upper"].as_f64().unwrap();
    assert!(lower <= 1.0 && 1.0 <= upper, "bracket [{lower}, {upper}]");
    assert!(upper - lower <= 1e-6);
    assert!(report["iterations"].as_u64().unwrap() <= 40);
    assert!(!report["certificates"].as_array().unwrap().is_empty());

    let second = run(dir.path(), &["radius", "a.csv", "--tol", "1e-6"]);
    assert_eq!(
        first.stdout, second.stdout,
        "reports must be byte-identical"
    );
}

#[test]
fn radius_rejects_axis_spectrum_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("rot.csv"), "0,1\n-1,0\n").unwrap();
    let out = run(dir.path(), &["radius", "rot.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "error");
    assert_eq!(report["kind"], "domain");
}

#[test]
fn halpha_circulant_reports_axis_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("circ.csv"),
        "0,1,0,1\n1,0,1,0\n0,1,0,1\n1,0,1,0\n",
    )
    .unwrap();
    let out = run(dir.path(), &["halpha", "circ.csv", "--alpha", "1"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["on_axis"], true);
    assert_eq!(report["normal"], true);

    let s3 = 3.0_f64.sqrt();
    let expected = [
        c(0.0, 1.0),
        c(0.0, -1.0),
        c(s3, 0.0),
        c(-s3, 0.0),
        c(0.0, 1.0),
        c(0.0, -1.0),
        c(s3, 0.0),
        c(-s3, 0.0),
    ];
    let spectrum = parse_complex_list(&report["spectrum"]);
    assert!(hamspec::pairing_error(&spectrum, &expected) <= 1e-7);
    let closed = parse_complex_list(&report["closed_form"]);
    assert!(hamspec::pairing_error(&closed, &expected) <= 1e-7);
}
