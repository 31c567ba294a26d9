use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn percolab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percolab"))
        .current_dir(dir)
        .args(args)
        .env("PERCOLAB_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gw_prints_closed_form_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = percolab(dir.path(), &["gw", "--d", "3", "--p", "0.75"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("q=0.111111111111"), "{text}");
    assert!(text.contains("y=0.962962962963"));
    assert!(text.contains("x=0.722222222222"));
}

#[test]
fn generated_hypercube_percolates_fully_at_p_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = percolab(dir.path(), &["gen", "hypercube", "--d", "3", "--out", "q3.el"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("q3.el")).unwrap();
    assert_eq!(text.lines().next(), Some("8 12"));
    assert_eq!(text.lines().count(), 13);

    let out = percolab(dir.path(), &["percolate", "--graph", "q3.el", "--p", "1", "--seed", "0"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["L1"], 8);
    assert_eq!(report["components"], 1);
}

#[test]
fn usage_and_io_errors_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(percolab(dir.path(), &["gw", "--d", "3"]).status.code(), Some(1));
    assert_eq!(percolab(dir.path(), &["no-such-command"]).status.code(), Some(1));
    let missing = percolab(dir.path(), &["percolate", "--graph", "missing.el", "--p", "0.5"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&missing.stderr).is_empty());
    assert_eq!(percolab(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_parameters_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = percolab(dir.path(), &["ercp", "--family", "hypercube", "--d", "6", "--eps", "-0.5", "--trials", "2"]);
    assert!(!out.status.success());
    let out = percolab(dir.path(), &["gw", "--d", "3", "--p", "1.5"]);
    assert!(!out.status.success());
}

#[test]
fn command_line_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "# defaults\neps = 0.7\ntrials = 5\nthresholds = scaled\n").unwrap();
    let out = percolab(
        dir.path(),
        &["ercp", "--config", "run.cfg", "--family", "hypercube", "--d", "8", "--trials", "3", "--seed", "4"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let flags = &report["invocation"]["flags"];
    assert_eq!(flags["eps"], 0.7);
    assert_eq!(flags["trials"], 3);
    assert_eq!(report["trials"].as_array().unwrap().len(), 3);
    assert_eq!(report["config"]["master_seed"], 4);
}

#[test]
fn repeated_runs_write_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec!["ercp", "--family", "hypercube", "--d", "9", "--eps", "0.5", "--trials", "9", "--seed", "3", "--thresholds", "scaled", "--out", out]
    };
    assert!(percolab(dir.path(), &args("a.json")).status.success());
    assert!(percolab(dir.path(), &args("b.json")).status.success());
    let a = fs::read_to_string(dir.path().join("a.json")).unwrap();
    let b = fs::read_to_string(dir.path().join("b.json")).unwrap();
    // the output path is part of the echoed invocation
    assert_eq!(a.replace("a.json", "x"), b.replace("b.json", "x"));
    let report: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["complete"], true);
}

#[test]
fn audit_reports_harper_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = percolab(dir.path(), &["audit", "--family", "hypercube", "--d", "5", "--profile", "harper", "--cap", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let props = report["audit"]["properties"].as_array().unwrap();
    assert_eq!(props[0]["status"], "verified_to_cap");
    assert_eq!(report["spectral"]["bipartite"], true);
}
