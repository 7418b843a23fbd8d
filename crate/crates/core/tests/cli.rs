use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["pentalab"];
    argv.extend_from_slice(args);
    let code = pentalab::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn meta_of(v: &Value) -> &Value {
    &v["meta"]
}

#[test]
fn lengths_report_embeds_provenance() {
    let (code, out, _) = run(&["lengths", "--seed", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let m = meta_of(&v);
    assert_eq!(m["seed"], 3);
    assert_eq!(m["code_version"], pentalab::CODE_VERSION);
    assert_eq!(m["cache_version"], pentalab::davis::CACHE_VERSION);
    assert!(m["config"].is_object());
}

#[test]
fn lengths_csv_carries_a_comment_header() {
    let (code, out, _) = run(&["lengths", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with('#'));
    assert!(out.contains("code_version"));
}

#[test]
fn render_of_the_identity_chamber_is_one_polygon() {
    let (code, out, _) = run(&["render", "--radius", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg") || out.starts_with("<?xml"));
    assert_eq!(out.matches("<polygon").count(), 1);
    assert!(out.contains("code_version"));
}

#[test]
fn quotient_runs_are_reproducible() {
    let args = ["quotient", "--ell", "8", "--c", "0.015", "--trials", "30", "--seed", "5"];
    let (code, first, _) = run(&args);
    assert!(code == 0 || code == 2);
    let (_, second, _) = run(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "4"]);
    let (_, third, _) = run(&with_workers);
    assert_eq!(first, second);
    assert_eq!(first, third);
    let (_, other_seed, _) = run(&["quotient", "--ell", "8", "--c", "0.015", "--trials", "30", "--seed", "6"]);
    assert_ne!(first, other_seed);
}

#[test]
fn quotient_jsonl_starts_with_meta() {
    let (_, out, _) = run(&["quotient", "--ell", "6", "--c", "0.015", "--trials", "3"]);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0]["meta"].is_object());
    assert!(lines[1]["status"].is_string());
}

#[test]
fn explicit_relators_give_a_verdict_code() {
    let (code, out, _) = run(&["quotient", "--relators", "02,0213", "--alpha", "0.4"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["status"], "violated");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["bogus"]).0, 64);
    assert_eq!(run(&["growth", "--metric", "sphere"]).0, 64);
    assert_eq!(run(&["quotient", "--trials", "0"]).0, 64);
    assert_eq!(run(&["render", "--format", "csv"]).0, 64);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn malformed_words_are_input_errors() {
    let (code, _, err) = run(&["pieces", "--pair", "07,12"]);
    assert_eq!(code, 65);
    assert!(err.starts_with("error"));
}

#[test]
fn cache_build_then_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let (code, _, _) = run(&["cache", "inspect", "--ball-radius", "3", "--cache-dir", path]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["cache", "build", "--ball-radius", "3", "--cache-dir", path]);
    assert_eq!(code, 0);
    let built: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(built["result"]["was_cached"], false);
    let (code, out, _) = run(&["cache", "inspect", "--ball-radius", "3", "--cache-dir", path]);
    assert_eq!(code, 0);
    let seen: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(seen["result"]["chambers"], built["result"]["chambers"]);
    assert_eq!(seen["result"]["chambers"], pentalab::davis::ball_size(3));
}

#[test]
fn binary_reports_exit_codes_and_reads_the_cache_env() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_pentalab");
    let status = Command::new(bin).args(["frobnicate"]).output().unwrap().status;
    assert_eq!(status.code(), Some(64));
    let out = Command::new(bin)
        .args(["cache", "build", "--ball-radius", "2"])
        .env("PENTALAB_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(pentalab::davis::cache_paths(dir.path(), 2).0.exists());
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("lengths.json");
    let (code, out, _) = run(&["lengths", "--out", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    assert!(v["result"].is_object());
}
