use std::path::PathBuf;
use std::process::{Command, Output};

fn pbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pbs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn transition_at_start_is_identity_with_zero_bound() {
    let p = problem(
        "e1.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 2], "A": "example1(a=2)"}"#,
    );
    let out = pbs(&["transition", "--problem", p.to_str().unwrap(), "--t", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("time,entry_00,entry_01,entry_10,entry_11,bound")
    );
    assert_eq!(lines.next(), Some("0,1,0,0,1,0"));
}

#[test]
fn transition_json_matches_closed_form() {
    let p = problem(
        "e1j.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 2], "A": "example1(a=2)"}"#,
    );
    let out = pbs(&[
        "transition",
        "--problem",
        p.to_str().unwrap(),
        "--t",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let records: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let values = records[0]["values"].as_array().unwrap();
    let e = std::f64::consts::E;
    let expected = [e, e, 0.0, e * e];
    for (v, x) in values.iter().zip(expected) {
        assert!((v.as_f64().unwrap() - x).abs() < 1e-10);
    }
}

#[test]
fn solve_requires_initial_state() {
    let p = problem(
        "nox0.json",
        r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]]}"#,
    );
    let out = pbs(&["solve", "--problem", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("x0"));
}

#[test]
fn solve_scalar_exponential() {
    let p = problem(
        "exp.json",
        r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]], "x0": [1.0]}"#,
    );
    let out = pbs(&["solve", "--problem", p.to_str().unwrap(), "--t", "0,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - std::f64::consts::E).abs() < 1e-10);
}

#[test]
fn unknown_check_is_an_input_error() {
    let p = problem(
        "zero.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 1], "A": [[[], []], [[], []]]}"#,
    );
    let out = pbs(&[
        "verify",
        "--problem",
        p.to_str().unwrap(),
        "--checks",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--checks"));
}

#[test]
fn zero_family_passes_every_check() {
    let p = problem(
        "zero2.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 1], "A": [[[], []], [[], []]]}"#,
    );
    let out = pbs(&["verify", "--problem", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn unsatisfiable_tolerance_is_an_engine_error() {
    let p = problem(
        "cap.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 2], "A": "example1(a=2)"}"#,
    );
    let out = pbs(&[
        "transition",
        "--problem",
        p.to_str().unwrap(),
        "--tol",
        "1e-30",
        "--degree-cap",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("degree cap"));
    assert!(out.stdout.is_empty());
}

#[test]
fn time_outside_domain_is_rejected() {
    let p = problem(
        "dom.json",
        r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]]}"#,
    );
    let out = pbs(&["transition", "--problem", p.to_str().unwrap(), "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--t"));
}

#[test]
fn backward_times_are_supported() {
    let p = problem(
        "back.json",
        r#"{"dim": 1, "t0": 1, "domain": [0, 1], "A": [[[1.0]]]}"#,
    );
    let out = pbs(&["transition", "--problem", p.to_str().unwrap(), "--t", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[1] - (-1f64).exp()).abs() <= row[2]);
}

#[test]
fn dump_phi_writes_steps() {
    let p = problem(
        "dump.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 1.5], "A": "airy(a=1)"}"#,
    );
    let dump = p.with_extension("phi.json");
    let out = pbs(&[
        "transition",
        "--problem",
        p.to_str().unwrap(),
        "--dump-phi",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert!(!value[0]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn bench_reports_every_tolerance() {
    let p = problem(
        "bench.json",
        r#"{"dim": 2, "t0": 0, "domain": [0, 1.5], "A": "airy(a=1)"}"#,
    );
    let out = pbs(&["bench", "--problem", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 7);
}
