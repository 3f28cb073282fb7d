use std::path::Path;
use std::process::Command;

use wavelab::cli::run;

fn wl(args: &[&str]) -> i32 {
    run(std::iter::once("wavelab").chain(args.iter().copied()))
}

fn rows(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn usage_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    assert_eq!(wl(&["sample", "nonsense", "--out", out]), 2);
    assert_eq!(wl(&["build", "--bank", "meyer", "--out", out]), 2);
    assert_eq!(wl(&["sample", "psi_hat", "--window", "3,-3", "--out", out]), 2);
    assert_eq!(wl(&["verify", "--grid", "8", "--out", out]), 2);
    assert_eq!(wl(&["frobnicate"]), 2);
}

#[test]
fn journe_verify_passes_and_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(wl(&["verify", "--bank", "journe", "--out", d.path().to_str().unwrap()]), 0);
    }
    let summary = |d: &tempfile::TempDir| std::fs::read(d.path().join("summary.csv")).unwrap();
    assert_eq!(summary(&a), summary(&b));
    let mut names: Vec<_> = std::fs::read_dir(a.path().join("reports")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 20);
    for n in names {
        let fa = std::fs::read(a.path().join("reports").join(&n)).unwrap();
        let fb = std::fs::read(b.path().join("reports").join(&n)).unwrap();
        assert_eq!(fa, fb, "{n:?}");
    }
    // the saved reports summarize to the same verdict
    assert_eq!(wl(&["report", a.path().join("reports").to_str().unwrap()]), 0);
}

#[test]
fn impossible_tolerance_fails_with_a_note() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(wl(&["verify", "--bank", "classical:haar", "--tol", "1e-20", "--out", d.path().to_str().unwrap()]), 1);
    let reports = wavelab::cli::load_reports(&d.path().join("reports")).unwrap();
    let failing: Vec<_> = reports.iter().filter(|r| !r.pass && !r.informational).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|r| !r.notes.is_empty()), "every failure explains itself");
}

#[test]
fn build_writes_the_file_contract() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(wl(&["build", "--bank", "example", "--r", "1", "--grid", "512", "--out", d.path().to_str().unwrap()]), 0);
    for f in ["p.csv", "h11.csv", "h12.csv", "h21.csv", "g1.csv", "g2.csv", "phi1.csv", "phi2.csv", "psi.csv"] {
        assert_eq!(rows(&d.path().join(f)), 512, "{f}");
    }
    let bank: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("bank.json")).unwrap()).unwrap();
    assert_eq!(bank["config"]["bank"], "example");
    assert_eq!(bank["validation"]["pass"], true);
    assert!(bank["bank"]["multiplicity"].as_array().is_some_and(|m| !m.is_empty()));
}

#[test]
fn sample_psi_hat_window() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    assert_eq!(wl(&["sample", "psi_hat", "--window", "-3,3", "--grid", "4096", "--out", out]), 0);
    let text = std::fs::read_to_string(d.path().join("psi_hat.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("x,"));
    let xs: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs.len(), 4096);
    assert_eq!((xs[0], xs[4095]), (-3.0, 3.0));
}

#[test]
fn config_file_with_flag_override() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.json");
    std::fs::write(&cfg, r#"{"bank": "classical:shannon", "grid": 128, "format": "json"}"#).unwrap();
    let out = d.path().join("o");
    let code = wl(&["--config", cfg.to_str().unwrap(), "sample", "psi_hat", "--grid", "64", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("psi_hat.json")).unwrap()).unwrap();
    assert_eq!(v["grid"].as_array().unwrap().len(), 64);
    std::fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(wl(&["--config", cfg.to_str().unwrap(), "build"]), 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_wavelab");
    assert_eq!(Command::new(bin).arg("--help").output().unwrap().status.code(), Some(0));
    let o = Command::new(bin).args(["sample", "nonsense"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown target"));
}
