use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn nevan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nevan")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = nevan(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn eval_exact_and_at_pole() {
    let v = json(&["eval", "--fn", &data("ex6_q2.json"), "--at", "1+i", "--decimal"]);
    assert_eq!(v["value"][0][0], serde_json::json!({"re": "1", "im": "-1"}));
    assert_eq!(v["decimal_non_authoritative"][0][0], "1-1i");
    let pole = nevan(&["eval", "--fn", &data("ex6_q2.json"), "--at", "0"]);
    assert_eq!(pole.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(nevan(&["eval", "--fn", &data("ex6_q2.json")]).status.code(), Some(1));
    assert_eq!(nevan(&["kappa", "--fn", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(nevan(&["bogus"]).status.code(), Some(1));
    assert_eq!(nevan(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("nevan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"size": 1, "entries": [[{"num": ["x"], "den": ["1"]}]]}"#).unwrap();
    assert_eq!(nevan(&["kappa", "--fn", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(nevan(&["kappa", "--fn", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn kappa_both_methods() {
    let v = json(&["kappa", "--fn", &data("ex6_sum.json")]);
    assert_eq!((v["kappa"].as_u64(), v["sample_lower_bound"].as_u64()), (Some(1), Some(1)));
    assert_eq!(v["agree"], true);
}

#[test]
fn kersym_direction() {
    let v = json(&["kersym", "--fn", &data("ex2.json")]);
    let d = &v["singular_directions"];
    assert_eq!(d.as_array().unwrap().len(), 1);
    assert_eq!((d[0][0]["re"].as_str(), d[0][1]["re"].as_str()), (Some("1"), Some("-1")));
    assert_eq!(v["kernel_signature"]["minus"], 0);
}

#[test]
fn sum_with_zero_is_preserved() {
    let v = json(&["sum-analyze", "--fn1", &data("ex6_q1.json"), "--fn2", &data("zero.json")]);
    assert_eq!(v["preserved"], true);
    assert_eq!(v["kappa"], v["kappa1"]);
    let ex6 = json(&["sum-analyze", "--fn1", &data("ex6_q1.json"), "--fn2", &data("ex6_q2.json"), "--scan", "algebraic"]);
    assert_eq!(ex6["preserved"], false);
    assert_eq!(ex6["structure_case"], "b");
}

#[test]
fn decompose_is_additive() {
    let v = json(&["decompose", "--realization", &data("diag_model.json")]);
    assert_eq!(v["additive"], true);
    assert_eq!(v["kappa_sum"], v["kappa"]);
    assert_eq!(v["parts"].as_array().unwrap().len(), 2);
}

#[test]
fn reduce_check_and_prop8() {
    assert_eq!(json(&["reduce-check", "--input", &data("block_reduction.json")])["reduced"], true);
    let v = json(&["prop8", "--params", &data("prop8_n3.json")]);
    assert_eq!(v["separation"]["obstruction"], true);
    assert!(v["clauses"].as_object().unwrap().values().all(|c| c.as_bool().unwrap_or(true)));
}

#[test]
fn output_is_deterministic() {
    let args = ["sum-analyze", "--fn1", &data("ex4_q1.json"), "--fn2", &data("ex4_q2.json")];
    let (a, b) = (nevan(&args), nevan(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
