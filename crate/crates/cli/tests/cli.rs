use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qdecouple"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qdecouple-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Writes a state file from real row-major entries.
fn write_real(dir: &Path, name: &str, dims: &[(&str, usize)], rows: &[&[f64]]) -> String {
    let dims: Vec<Value> = dims.iter().map(|(l, d)| json!({"label": l, "dim": d})).collect();
    let matrix: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect();
    let path = dir.join(name);
    std::fs::write(&path, json!({"dims": dims, "matrix": matrix}).to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn diag(entries: &[f64]) -> Vec<Vec<f64>> {
    (0..entries.len())
        .map(|i| {
            (0..entries.len())
                .map(|j| if i == j { entries[i] } else { 0.0 })
                .collect()
        })
        .collect()
}

fn write_diag(dir: &Path, name: &str, dims: &[(&str, usize)], entries: &[f64]) -> String {
    let rows = diag(entries);
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    write_real(dir, name, dims, &refs)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn divergence_of_a_state_with_itself_is_zero() {
    let dir = scratch("self");
    let a = write_diag(&dir, "a.json", &[("A", 3)], &[0.5, 0.3, 0.2]);
    for kind in [["--kind", "umegaki", "", ""], ["--kind", "sandwiched", "--alpha", "2"]] {
        let mut args = vec!["divergence", &a, &a];
        args.extend(kind.iter().filter(|s| !s.is_empty()));
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        let value: f64 = stdout(&out).trim().parse().unwrap();
        assert!(value.abs() < 1e-12, "{value}");
    }
}

#[test]
fn divergence_outside_support_is_infinite() {
    let dir = scratch("orth");
    let a = write_diag(&dir, "a.json", &[("A", 2)], &[1.0, 0.0]);
    let b = write_diag(&dir, "b.json", &[("A", 2)], &[0.0, 1.0]);
    let out = run(&["divergence", &a, &b, "--kind", "petz", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "inf");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = scratch("usage");
    let a = write_diag(&dir, "a.json", &[("A", 2)], &[0.5, 0.5]);
    let missing = dir.join("missing.json");
    let malformed = dir.join("bad.json");
    std::fs::write(
        &malformed,
        r#"{"dims": [{"label": "A", "dim": 2}], "matrix": [[[1, 0]]]}"#,
    )
    .unwrap();
    let unnormalized = write_diag(&dir, "u.json", &[("A", 2)], &[0.9, 0.5]);
    let cases: Vec<Vec<&str>> = vec![
        vec!["divergence", &a, missing.to_str().unwrap(), "--kind", "umegaki"],
        vec!["divergence", &a, malformed.to_str().unwrap(), "--kind", "umegaki"],
        vec!["divergence", &a, &unnormalized, "--kind", "umegaki"],
        vec!["divergence", &a, &a, "--kind", "petz"],
        vec!["divergence", &a, &a, "--kind", "petz", "--alpha", "-1"],
        vec!["verify", "--trials", "0"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {out:?}");
    }
}

#[test]
fn precondition_violation_exits_3() {
    let dir = scratch("precondition");
    // Choi state of a depolarizing channel, which is not a dephasing channel.
    let q = 0.25;
    let p = 0.5;
    let c = write_real(
        &dir,
        "choi.json",
        &[("in", 2), ("out", 2)],
        &[
            &[(1.0 - p) / 2.0 + q / 2.0, 0.0, 0.0, (1.0 - p) / 2.0],
            &[0.0, q / 2.0, 0.0, 0.0],
            &[0.0, 0.0, q / 2.0, 0.0],
            &[(1.0 - p) / 2.0, 0.0, 0.0, (1.0 - p) / 2.0 + q / 2.0],
        ],
    );
    let out_csv = dir.join("c.csv");
    let out = run(&[
        "exponent-curve",
        &c,
        "--labels",
        "in,out",
        "--task",
        "channel",
        "--dephasing",
        "--r-min",
        "0",
        "--r-max",
        "0.1",
        "--r-points",
        "2",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn product_state_achievable_exponent_is_twice_the_rate() {
    let dir = scratch("product");
    let rho = write_diag(&dir, "rho.json", &[("A", 2), ("E", 2)], &[0.35, 0.15, 0.35, 0.15]);
    let csv = dir.join("curve.csv");
    let out = run(&[
        "exponent-curve",
        &rho,
        "--labels",
        "A,E",
        "--task",
        "standard-decoupling",
        "--r-min",
        "0.1",
        "--r-max",
        "0.5",
        "--r-points",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("critical_rate"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,achievable,converse,exact"));
    let mut n = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let r: f64 = cells[0].parse().unwrap();
        let achievable: f64 = cells[1].parse().unwrap();
        assert!((achievable - 2.0 * r).abs() < 1e-8, "{line}");
        n += 1;
    }
    assert_eq!(n, 3);
}

#[test]
fn decoupled_instance_has_zero_error() {
    let dir = scratch("decoupled");
    let rho = write_diag(
        &dir,
        "rho.json",
        &[("A", 4), ("E", 2)],
        &[0.175, 0.075, 0.175, 0.075, 0.175, 0.075, 0.175, 0.075],
    );
    let out = run(&[
        "decouple-mc",
        &rho,
        "--d-a1",
        "2",
        "--d-a2",
        "2",
        "--samples",
        "20",
        "--seed",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["mean"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(report["n"], 20);
    assert_eq!(report["seed"], 4);
    assert!(report["bound_opt"].as_f64().unwrap() >= 0.0);
}

#[test]
fn bound_violation_exits_4_after_printing_the_report() {
    let dir = scratch("violation");
    let psi = [1.0, 2.0, 0.0, 1.0, 3.0, -1.0, 0.0, 2.0];
    let norm2: f64 = psi.iter().map(|x| x * x).sum();
    let rows: Vec<Vec<f64>> = (0..8)
        .map(|i| {
            (0..8)
                .map(|j| 0.7 * psi[i] * psi[j] / norm2 + if i == j { 0.3 / 8.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let rho = write_real(&dir, "rho.json", &[("A", 4), ("E", 2)], &refs);
    // A negative slack turns the statistical check into mean + 1000·stderr ≤ bound.
    let out = run(&[
        "decouple-mc",
        &rho,
        "--d-a1",
        "2",
        "--d-a2",
        "2",
        "--samples",
        "50",
        "--sigmas=-1000",
    ]);
    assert_eq!(out.status.code(), Some(4), "{out:?}");
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["mean"].as_f64().unwrap() > 0.0);
}

#[test]
fn failed_verification_exits_5_and_writes_the_instance() {
    let dir = scratch("verify");
    let out = run(&[
        "verify",
        "--suite",
        "data-processing",
        "--trials",
        "2",
        "--seed",
        "1",
        "--tol=-1",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5), "{out:?}");
    assert!(stdout(&out).contains("FAIL"));
    let written: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(
        written.iter().any(|n| n.starts_with("verify-data-processing-seed1-")),
        "{written:?}"
    );
}

#[test]
fn verify_rejects_unknown_suites() {
    let out = run(&["verify", "--suite", "no-such-suite", "--trials", "3", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
