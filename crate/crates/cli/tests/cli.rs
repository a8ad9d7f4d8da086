use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn umflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umflow"))
        .args(args)
        .current_dir(dir)
        .env_remove("UMFLOW_RAMSEY_BUDGET")
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("umflow-out/report.json")).unwrap()).unwrap()
}

#[test]
fn verify_suite_lists_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = umflow(dir.path(), &["verify-suite", "--max-leaves", "5", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    let names: Vec<&str> = r["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    let all: Vec<&str> = umflow::suites::SUITES.iter().map(|s| s.name).collect();
    assert_eq!(names, all);
    assert_eq!(r["checks_failed"], 0);
    assert_eq!(r["seed"], 7);
    assert!(dir.path().join("umflow-out/timing.json").exists());
}

#[test]
fn ramsey_number_with_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out = umflow(dir.path(), &["ramsey", "number", "-k", "2", "-m", "3", "-r", "2", "--n-max", "8", "--budget", "1e8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    assert_eq!(r["result"]["dr"]["result"], "exact");
    let certs: Vec<String> = r["certificates"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
    assert!(!certs.is_empty());
    let check_dir = tempfile::tempdir().unwrap();
    for c in &certs {
        let path = dir.path().join("umflow-out").join(c);
        let out = umflow(check_dir.path(), &["ramsey", "check", path.to_str().unwrap()]);
        assert!(out.status.success(), "{c}");
    }

    // A recoloured lower-bound certificate is refused.
    let lower = certs.iter().find(|c| c.contains("lower")).unwrap();
    let path = dir.path().join("umflow-out").join(lower);
    let mut cert: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    for v in cert["coloring"].as_object_mut().unwrap().values_mut() {
        *v = Value::from(0);
    }
    let bad = check_dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_vec(&cert).unwrap()).unwrap();
    assert_eq!(umflow(check_dir.path(), &["ramsey", "check", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn transcript_is_replayed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["ramsey", "number", "-k", "2", "-m", "3", "-r", "2", "--n-max", "8", "--transcript", "log.jsonl"];
    assert!(umflow(dir.path(), &args).status.success());
    let first = fs::read(dir.path().join("umflow-out/report.json")).unwrap();
    let log = fs::read_to_string(dir.path().join("log.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 4);
    assert!(umflow(dir.path(), &args).status.success());
    assert_eq!(fs::read_to_string(dir.path().join("log.jsonl")).unwrap(), log);
    assert_eq!(fs::read(dir.path().join("umflow-out/report.json")).unwrap(), first);
}

#[test]
fn budget_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_umflow"))
        .args(["ramsey", "number", "-k", "2", "-m", "3", "-r", "2", "--n-max", "8"])
        .env("UMFLOW_RAMSEY_BUDGET", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(report(dir.path())["result"]["dr"]["result"], "unknown");
}

#[test]
fn factor_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = umflow(dir.path(), &["factor", "roundtrip", "-k", "2", "--table", "id:+1,swap:-1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    let want: Value = serde_json::json!({ "12": 1, "21": -1 });
    assert_eq!(r["result"]["table"], want);
    for case in r["result"]["cases"].as_array().unwrap() {
        assert_eq!(case["recovered"], want);
    }
    assert!(umflow(dir.path(), &["factor", "adversarial", "-k", "2"]).status.success());
    assert_eq!(report(dir.path())["checks_failed"], 0);
}

#[test]
fn witness_certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = umflow(
        dir.path(),
        &["dynamics", "proximality", "--chain", "00,01,10,11", "--chain2", "11,10,01,00", "--partition", "0|1"],
    );
    assert!(out.status.success());
    let path = dir.path().join("umflow-out/witness-proximality.json");
    assert!(umflow(dir.path(), &["dynamics", "check", path.to_str().unwrap()]).status.success());

    let mut cert: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    cert["witness"] = serde_json::json!(["ε→ε"]);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_vec(&cert).unwrap()).unwrap();
    assert_eq!(umflow(dir.path(), &["dynamics", "check", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(umflow(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(umflow(dir.path(), &["ramsey", "verify", "-n", "3"]).status.code(), Some(2));
    assert_eq!(umflow(dir.path(), &["cantor", "inverse", "0→1"]).status.code(), Some(2));
    assert_eq!(umflow(dir.path(), &["verify-suite", "--only", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        umflow(dir.path(), &["ramsey", "verify", "-n", "3", "-k", "3", "-m", "2", "-r", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn query_verbs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(umflow(dir.path(), &["partitions", "enumerate", "-n", "3", "-k", "2"]).status.success());
    assert_eq!(report(dir.path())["result"], serde_json::json!(["001", "010", "011"]));
    assert!(umflow(dir.path(), &["cantor", "apply", "--map", "0→00,10→01,11→1", "--set", "0"]).status.success());
    assert_eq!(report(dir.path())["result"], serde_json::json!(["00"]));
    assert!(umflow(dir.path(), &["chains", "order", "--chain", "10,00,11,01", "--partition", "0|1"]).status.success());
    assert_eq!(report(dir.path())["result"], serde_json::json!([["1"], ["0"]]));
    let out = umflow(
        dir.path(),
        &["symbolic", "cocycle", "--g", "0→1,1→0", "--h", "0→00,10→01,11→1", "--chain", "0,1", "--partition", "0|1"],
    );
    assert!(out.status.success());
}
