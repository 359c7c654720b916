use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn opconvex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opconvex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn domain_suite_reports_cross_check_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = opconvex(&[
        "suite",
        "domain",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&out_path);
    assert_eq!(report["seed"], 1);
    assert!(report["tool_version"].is_string());
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    let cross = checks
        .iter()
        .find(|c| c["id"] == "d2_cross_check_0")
        .unwrap();
    assert_eq!(cross["witness"]["count"], 10_000);
    assert_eq!(cross["witness"]["mismatches"], 0);
    let member = checks
        .iter()
        .find(|c| c["id"] == "membership_example")
        .unwrap();
    assert_eq!(member["witness"]["A_k"]["rows"], 2);
    assert!(checks
        .iter()
        .all(|c| c["anchor"].is_string() && c["verdict"] == "PASS"));
}

#[test]
fn certify_suite_passes_and_contains_counterexample() {
    let out = opconvex(&["suite", "certify", "--seed", "42"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let t2 = report["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "t2_counterexample")
        .unwrap();
    assert!((t2["margin"].as_f64().unwrap() + 0.0625).abs() < 1e-12);
}

#[test]
fn all_suites_pass() {
    let out = opconvex(&["suite", "all", "--seed", "7"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["funcalc", "means", "domain", "hessian", "certify"]);
}

#[test]
fn reports_are_deterministic() {
    let a = opconvex(&["suite", "means", "--seed", "3"]);
    let b = Command::new(env!("CARGO_BIN_EXE_opconvex"))
        .args(["suite", "means", "--seed", "3"])
        .env("OPCONVEX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = opconvex(&["suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("possible values"));
}

#[test]
fn repro_t2() {
    let v = json_stdout(&opconvex(&["repro", "t2"]));
    assert_eq!(v["id"], "t2_counterexample");
    assert!((v["value"].as_f64().unwrap() + 0.0625).abs() < 1e-12);
    let v = json_stdout(&opconvex(&["repro", "t2", "--eps", "0.01"]));
    assert!(v["value"].as_f64().unwrap() < 0.0);
}

#[test]
fn certify_trace_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = opconvex(&[
        "certify",
        "--target",
        "trace",
        "--function",
        "pow:0.5,0.5",
        "--dims",
        "3x3",
        "--trials",
        "200",
        "--seed",
        "42",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let r = read_json(&path);
    assert_eq!(r["verdict"], "CONCAVE-consistent");
    assert_eq!(r["trials"], 200);
    assert_eq!(r["seed"], 42);
    assert!(r["witness"]["inputs"]["x"]["A"]["re"].is_array());
    assert_eq!(r["config"]["function"]["p"], serde_json::json!([0.5, 0.5]));

    let v = json_stdout(&opconvex(&[
        "certify",
        "--target",
        "trace",
        "--function",
        "pow:0.7,0.7",
        "--trials",
        "5000",
        "--search",
    ]));
    assert_eq!(v["verdict"], "VIOLATION");
}

#[test]
fn certify_rejects_window_outside_domain() {
    let out = opconvex(&[
        "certify",
        "--function",
        "frac:1,1",
        "--window",
        "0.3:2",
        "--trials",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("concavity domain"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"target": "two-of-three", "fixed": "K", "dims": "2x2", "trials": 30, "seed": 9}"#,
    )
    .unwrap();
    let v = json_stdout(&opconvex(&["certify", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["trials"], 30);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["config"]["fixed"], "K");
    let v = json_stdout(&opconvex(&[
        "certify",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "12",
    ]));
    assert_eq!(v["trials"], 12);
}

#[test]
fn sweep_grid() {
    let v = json_stdout(&opconvex(&[
        "sweep",
        "--grid",
        "p=0.5:0.7:0.2,q=0.5:0.7:0.2",
        "--trials",
        "500",
        "--seed",
        "1",
    ]));
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    for c in cells {
        let s = c["p"].as_f64().unwrap() + c["q"].as_f64().unwrap();
        assert_eq!(c["verdict"] == "VIOLATION", s >= 1.2 - 1e-12, "{c}");
    }
}

#[test]
fn hessian_scan_from_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    std::fs::write(&grid, r#"{"nodes": [[0.3, 0.5], [0.3, 0.5]]}"#).unwrap();
    let g = grid.to_str().unwrap();
    let v = json_stdout(&opconvex(&[
        "hessian",
        "--function",
        "frac:1,1",
        "--grid",
        g,
        "--mode",
        "nsd",
        "--index",
        "1,1",
    ]));
    assert_eq!(v["verdict"], "FAIL");
    assert_eq!(v["per_index"].as_array().unwrap().len(), 4);
    assert_eq!(v["hessian"]["index"], serde_json::json!([1, 1]));

    std::fs::write(&grid, r#"{"nodes": [[0.6, 1.0], [0.6, 1.0]]}"#).unwrap();
    let v = json_stdout(&opconvex(&[
        "hessian",
        "--function",
        "frac:1,1",
        "--grid",
        g,
        "--mode",
        "nsd",
    ]));
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn domain_command() {
    let v = json_stdout(&opconvex(&["domain", "--mu", "1,1", "--point", "0.5,0.5"]));
    assert_eq!(v["member"], true);
    assert_eq!(
        v["A_k"]["re"],
        serde_json::json!([[1.0, -1.0], [-1.0, 1.0]])
    );
    let v = json_stdout(&opconvex(&["domain", "--mu", "1,1", "--point", "0.4,0.4"]));
    assert_eq!(v["member"], false);
}

#[test]
fn means_commands() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"rows": 2, "cols": 2, "re": [[4, 0], [0, 1]]}"#).unwrap();
    std::fs::write(&b, r#"{"rows": 2, "cols": 2, "re": [[9, 0], [0, 1]]}"#).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let g = json_stdout(&opconvex(&[
        "means",
        "--op",
        "geometric",
        "--a",
        a,
        "--b",
        b,
    ]));
    assert!((g["re"][0][0].as_f64().unwrap() - 6.0).abs() < 1e-12);
    let p = json_stdout(&opconvex(&[
        "means", "--op", "probe", "--a", a, "--b", b, "--trials", "300", "--seed", "2",
    ]));
    assert_eq!(p["tested"], 300);
    assert_eq!(p["violations"], 0);
    let h = json_stdout(&opconvex(&[
        "means",
        "--op",
        "harmonic-check",
        "--a",
        a,
        "--b",
        b,
    ]));
    assert!(h["mean_block"].as_f64().unwrap() >= -1e-10);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rows": 2, "cols": 2, "re": [[1, 2], [0, 1]]}"#).unwrap();
    let out = opconvex(&["means", "--a", bad.to_str().unwrap(), "--b", b]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_input_file_is_reported() {
    let out = opconvex(&[
        "hessian",
        "--function",
        "recip:1",
        "--grid",
        "/nonexistent/grid.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading"));
}
