use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nls-fem"))
        .args(args)
        .env_remove("NLS_THREADS")
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn summary(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zero_case_writes_zero_norms() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zero.csv");
    let out = nls(&["run", "--case", "zero", "--m", "8", "--steps", "5", "--out", path_str(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 6);
    for row in rows {
        for v in &row[2..] {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn run_prints_csv_without_outputs() {
    let out = nls(&["run", "--case", "ms1", "--m", "4", "--steps", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,t,l2_norm,g_l2,wall_time,err_l2,err_h1");
    assert_eq!(lines.count(), 4);
}

#[test]
fn free_wave_conserves_mass() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("s.json");
    let out = nls(&["run", "--case", "free1", "--m", "64", "--steps", "64", "--out", path_str(&json)]);
    assert!(out.status.success());
    let s = summary(&json);
    assert!(s["mass_drift"].as_f64().unwrap() <= 1e-10);
    assert_eq!(s["steps"].as_u64().unwrap(), 64);
    assert_eq!(s["factorizations"].as_u64().unwrap(), 128);
}

#[test]
fn finer_mesh_has_smaller_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = |m: &str| {
        let json = dir.path().join(format!("{m}.json"));
        assert!(nls(&["run", "--case", "ms1", "--m", m, "--steps", m, "--out", path_str(&json)]).status.success());
        summary(&json)["final_err_l2"].as_f64().unwrap()
    };
    let (coarse, fine) = (err("32"), err("64"));
    assert!(fine < coarse / 3.0, "{coarse} {fine}");
}

#[test]
fn summary_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (csv1, json1) = (dir.path().join("a.csv"), dir.path().join("a.json"));
    let out = nls(&[
        "run", "--case", "ms1", "--degree", "2", "--m", "10", "--steps", "12", "--jitter", "0.25", "--seed", "9",
        "--out", path_str(&csv1), "--out", path_str(&json1),
    ]);
    assert!(out.status.success());
    let mut config = summary(&json1)["config"].clone();
    let csv2 = dir.path().join("b.csv");
    config["outputs"] = Value::from(vec![path_str(&csv2)]);
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    assert!(nls(&["run", "--config", path_str(&cfg)]).status.success());
    assert_eq!(fs::read(&csv1).unwrap(), fs::read(&csv2).unwrap());
}

#[test]
fn repeated_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out = nls(&["converge", "--case", "ms1", "--levels", "3", "--jitter", "0.3", "--seed", "4", "--out", path_str(p)]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn converge_and_consistency_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    assert!(nls(&["converge", "--case", "ms1", "--levels", "3", "--out", path_str(&csv)]).status.success());
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 3);
    let csv = dir.path().join("k.csv");
    let out = nls(&["consistency", "--case", "ms1", "--out", path_str(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_rows(&csv).len(), 7);
    assert!(nls(&["consistency", "--case", "zero"]).status.success());
}

#[test]
fn non_finite_forcing_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"case": {"domain": [0, 1], "lambda": -1e308, "omega": 1e308}, "m": 4, "time_steps": 2}"#,
    )
    .unwrap();
    let out = nls(&["run", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(nls(&["run", "--case", "nope"]).status.code(), Some(2));
    assert_eq!(nls(&["run", "--degree", "5"]).status.code(), Some(2));
    assert_eq!(nls(&["run", "--m", "0"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.json");
    fs::write(&cfg, r#"{"degre": 2}"#).unwrap();
    assert_eq!(nls(&["run", "--config", path_str(&cfg)]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_nls-fem"))
        .args(["converge", "--levels", "3"])
        .env("NLS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missed_threshold_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    fs::write(&cfg, r#"{"case": "ms1", "levels": 3, "min_rate_l2": 5.0}"#).unwrap();
    assert_eq!(nls(&["converge", "--config", path_str(&cfg)]).status.code(), Some(3));
    fs::write(&cfg, r#"{"case": "ms1", "levels": 3, "min_rate_l2": 1.5}"#).unwrap();
    assert_eq!(nls(&["converge", "--config", path_str(&cfg)]).status.code(), Some(0));
}
