use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semihilbert"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn semihilbert")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn example_files(dir: &Path) -> (String, String) {
    let a = write(dir, "a.json", r#"{"rows":2,"cols":2,"data":[[1,0],[-1,0],[-1,0],[2,0]]}"#);
    let t = write(dir, "t.json", r#"{"rows":2,"cols":2,"data":[[1,0],[1,0],[0,0],[1,0]]}"#);
    (a, t)
}

#[test]
fn bound_thm31_on_worked_example() {
    let dir = TempDir::new().unwrap();
    let (a, t) = example_files(dir.path());
    let out = run(&["--format", "json", "bound", "THM31", "-A", &a, "-T", &t]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["id"], "THM31");
    assert_eq!(v["holds"], true);
    // w_A(T)^4 with w_A(T) = 3/2.
    assert!((v["lhs"].as_f64().unwrap() - 5.0625).abs() < 1e-9);
}

#[test]
fn malformed_matrix_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let (_, t) = example_files(dir.path());
    let bad = write(dir.path(), "bad.json", "{not json");
    let out = run(&["bound", "THM31", "-A", &bad, "-T", &t]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn non_hermitian_weight_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (_, t) = example_files(dir.path());
    let a = write(dir.path(), "nh.json", r#"{"rows":2,"cols":2,"data":[[1,0],[1,0],[0,0],[1,0]]}"#);
    let out = run(&["bound", "IN6", "-A", &a, "-T", &t]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pair_bound_needs_second_operator() {
    let dir = TempDir::new().unwrap();
    let (a, t) = example_files(dir.path());
    let out = run(&["bound", "THM41", "-A", &a, "-T", &t]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p1 = dir.path().join("r1.json");
    let p2 = dir.path().join("r2.json");
    for p in [&p1, &p2] {
        let out = run(&[
            "verify",
            "--trials",
            "12",
            "--lemma-trials",
            "40",
            "--seed",
            "9",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn verify_csv_has_header() {
    let out = run(&["--format", "csv", "verify", "--trials", "3", "--lemma-trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l == "id,alpha,beta,r,n,lhs,rhs,slack,holds"));
}

#[test]
fn application_demos_exit_zero() {
    for args in [
        &["sturm", "--n", "1,3,7"][..],
        &["fock", "--nmax", "2,5"][..],
        &["spin"][..],
        &["rdiff", "--n", "6"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn sturm_csv_columns() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("s.csv");
    let out = run(&["--format", "csv", "--out", p.to_str().unwrap(), "sturm", "--n", "1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,h,computed,exact,rel_err"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn worked_examples_report_conflicts() {
    let out = run(&["paper-examples"]);
    // The stated values disagree with the A-unit-sphere definitions.
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("w_A(T)"));
}
