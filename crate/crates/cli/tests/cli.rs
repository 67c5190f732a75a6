use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_automorphe"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn hecke_table_rows_sum_to_binomials() {
    let out = run(&["hecke-table", "--k", "12", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,l,r,alpha"));
    let mut sums = [0u128; 13];
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], "12");
        sums[f[1].parse::<usize>().unwrap()] += f[3].parse::<u128>().unwrap();
    }
    for (l, s) in sums.iter().enumerate() {
        assert_eq!(*s, binom(12, l as u128));
    }
}

#[test]
fn kloosterman_small_modulus() {
    let out = run(&["kloosterman", "--m", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let s = v["rows"][0]["value"][0].as_f64().unwrap();
    assert!((s + 1.0).abs() < 1e-12);
}

#[test]
fn theta_check_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.json");
    let out = run(&["theta-check", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
}

#[test]
fn complex_arguments() {
    let out = run(&["eval-eisenstein", "--nu", "0.4+0.3i", "--z", "-0.2+1.1i", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["eval-eisenstein", "--nu", "abc", "--z", "1i"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = run(&["eval-eisenstein", "--nu", "1", "--z", "1i"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["eval-eisenstein", "--nu", "2i", "--z", "0.5-1i"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    for args in [
        vec!["no-such-command"],
        vec!["budget", "--p", "4"],
        vec!["budget", "--eps", "1.5"],
        vec!["scan-envelope", "--radius", "5"],
        vec!["hecke-table", "--k", "x"],
    ] {
        let mut a = args.clone();
        a.extend(["--out", path.to_str().unwrap()]);
        let out = run(&a);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!path.exists());
    }
}

#[test]
fn fixture_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"lambda": 6.93, "parity": 0, "precision": 1e-3, "coeffs": {"1": [1.5, 0]}}"#).unwrap();
    let out = run(&["ramanujan", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    std::fs::write(&bad, r#"{"lambda": 6.93, "parity": 0}"#).unwrap();
    assert_eq!(run(&["ramanujan", "--fixture", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["eval-maass", "--fixture", missing.to_str().unwrap(), "--z", "1i"]).status.code(), Some(2));
}

#[test]
fn ramanujan_reports_and_fails() {
    let out = run(&["ramanujan", "--fixture", fixture("synthetic_violating.json").to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Ramanujan bound violated at p = 2"));

    // b_4 breaks b_2 b_2 = b_4 + b_1
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    std::fs::write(
        &f,
        r#"{"lambda": 6.93, "parity": 0, "precision": 1e-9,
            "coeffs": {"1": [1, 0], "2": [1.2, 0], "3": [0.5, 0], "4": [0.7, 0]}}"#,
    )
    .unwrap();
    let out = run(&["ramanujan", "--fixture", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["pass"], false);
}

#[test]
fn thread_hint_and_budget() {
    let out = bin().env("AUTOMORPHE_THREADS", "1").args(["budget", "--p", "2", "--n", "16"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[15]["params"]["total"].as_f64().unwrap(), 2f64.powi(32));
}

#[test]
fn small_experiments() {
    let out = run(&["scan-envelope", "--p", "2", "--n", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
    let out = run(&["bm-check", "--m", "1", "--radius", "400", "--kmax", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["poincare", "--z", "0.2+1.3i", "--radius", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["eval-maass", "--fixture", fixture("synthetic_hecke.json").to_str().unwrap(), "--z", "0.1+0.8i"]);
    assert_eq!(out.status.code(), Some(0));
}
