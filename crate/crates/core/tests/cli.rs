mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::scenarios_dir;

fn qsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsep")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    scenarios_dir().join(format!("{name}.toml")).display().to_string()
}

fn run_into(dir: &Path, name: &str, extra: &[&str]) -> Output {
    let out = dir.display().to_string();
    let mut args = vec!["run", scenario(name).leak() as &str, "-o", out.leak()];
    args.extend_from_slice(extra);
    qsep(&args)
}

#[test]
fn validate_bundled_scenarios() {
    for name in ["disjoint", "intersection", "intersection_quantum", "delay_velocity"] {
        let out = qsep(&["validate", &scenario(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    }
}

#[test]
fn validate_reports_paths_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("disjoint"))
        .unwrap()
        .replace("[6, 6, 7, 8, 8, 9, 11, 11]", "[6, 6, 99, 8, 8, 9, 11, 11]")
        .replace("tables/disjoint_set0.txt", &scenarios_dir().join("tables/disjoint_set0.txt").display().to_string());
    let path = dir.path().join("bad.toml");
    fs::write(&path, text).unwrap();
    let out = qsep(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sets[1].params.entries[2]"));
}

#[test]
fn oversized_register_exits_with_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    // intersection is 49 points (6 qubits); t = 19 pushes the register to 25
    let out = run_into(dir.path(), "intersection_quantum", &["--t", "19"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_file_is_an_error() {
    let out = qsep(&["run", "/nonexistent/scenario.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_writes_results_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), "intersection", &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("decisions.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "observation,verdict,assigned_set,tie_sets,within_error_bound,tie_broken,f_0,m_hat_0,error_bound_0,f_1,m_hat_1,error_bound_1"
    );
    assert_eq!(csv.lines().count(), 10);
    assert!(dir.path().join("curve_set0.csv").exists());
    assert!(dir.path().join("curve_set1.csv").exists());
}

#[test]
fn exact_results_match_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_into(dir.path(), "intersection", &[]).status.code(), Some(0));
    let got = fs::read_to_string(dir.path().join("results.json")).unwrap();
    let golden = include_str!("golden/intersection_results.json");
    assert_eq!(got, golden);
}

#[test]
fn seeded_quantum_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(run_into(d.path(), "intersection_quantum", &[]).status.code(), Some(0));
    }
    for f in ["results.json", "decisions.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let c = tempfile::tempdir().unwrap();
    run_into(c.path(), "intersection_quantum", &["--seed", "7"]);
    assert_ne!(
        fs::read(a.path().join("results.json")).unwrap(),
        fs::read(c.path().join("results.json")).unwrap()
    );
}

#[test]
fn curve_verb_writes_only_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let status = qsep(&["curve", &scenario("disjoint"), "-o", &out]).status;
    assert_eq!(status.code(), Some(0));
    assert!(!dir.path().join("decisions.csv").exists());
    let curve = fs::read_to_string(dir.path().join("curve_set0.csv")).unwrap();
    assert_eq!(curve.lines().next().unwrap(), "symbol,m_hat,value,error_bound");
    // symbol 3 appears three times in set 0's eight entries
    assert!(curve.lines().any(|l| l == "3,3,0.375,0"));
}
