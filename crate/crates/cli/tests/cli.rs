use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mv-spectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mv-spectra"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const L2: &str = r#"{"kind":"lukasiewicz","n":2}"#;
const L2XL3: &str = r#"{"kind":"product","factors":[{"kind":"lukasiewicz","n":2},{"kind":"lukasiewicz","n":3}]}"#;

#[test]
fn check_l4_ok() {
    let out = run(&["check", "--algebra", r#"{"kind":"lukasiewicz","n":4}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["carrier"], 5);
    assert_eq!(v["schema"], "mv-spectra/1");
}

#[test]
fn malformed_json_is_usage_error() {
    let out = run(&["check", "--algebra", "{\"kind\":\n \"lukasiewicz\", n}"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn perturbed_table_echoes_witness() {
    // Ł1 with ¬ swapped for the identity
    let out = run(&["check", "--algebra", r#"{"kind":"tables","neg":[0,1],"oplus":[[0,1],[1,1]]}"#]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["ok"], false);
    assert!(v["violation"]["law"].is_string());
    assert!(v["violation"]["witness"].as_array().is_some_and(|w| !w.is_empty()));
}

#[test]
fn l2_spectrum_is_two_point_chain() {
    let out = run(&["spectrum", "--algebra", L2]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["order"], serde_json::json!([[0, 1]]));
    assert_eq!(v["y"], serde_json::json!([0]));
    assert_eq!(v["z"], serde_json::json!([0]));
    assert_eq!(v["points"][0]["involution"], 1);
    assert_eq!(v["points"][1]["k"], 0);
}

#[test]
fn l1_spectrum_single_point() {
    let out = run(&["spectrum", "--algebra", r#"{"kind":"lukasiewicz","n":1}"#]);
    let v = json_of(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
}

#[test]
fn chang_spectrum_taxonomy() {
    let out = run(&["spectrum", "--algebra", r#"{"kind":"chang"}"#, "--chang-bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["bound"], 3);
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    assert_eq!(v["y"], serde_json::json!(["I0", "Iω"]));
    assert_eq!(v["z"], serde_json::json!(["Iω"]));
}

#[test]
fn spectrum_dot_marks_y_and_z() {
    let out = run(&["spectrum", "--algebra", L2, "--format", "dot", "--plus-edges"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("digraph X {"));
    assert!(s.contains("0 [label=\"0\", shape=doublecircle, style=filled]"));
    assert!(s.contains("style=dashed"));
    assert!(s.trim_end().ends_with('}'));
}

#[test]
fn l3_verify_all_passes() {
    let out = run(&["verify", "--algebra", r#"{"kind":"lukasiewicz","n":3}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["suite"], "all");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 30);
    assert!(checks.iter().all(|c| c["status"] != "fail"));
}

#[test]
fn product_sheaf_prime_passes() {
    let out = run(&["verify", "--algebra", L2XL3, "--suite", "sheaf-prime"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let eta = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "prime-eta").unwrap();
    assert_eq!(eta["status"], "pass");
}

#[test]
fn l1_kaplansky_passes() {
    let out = run(&["verify", "--algebra", r#"{"kind":"lukasiewicz","n":1}"#, "--suite", "kaplansky"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cap_exceeded_is_skipped() {
    let big = r#"{"kind":"product","factors":[{"kind":"lukasiewicz","n":20},{"kind":"lukasiewicz","n":20}]}"#;
    let out = run(&["verify", "--algebra", big, "--cap", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["checks"][0]["status"], "skipped");
}

#[test]
fn cap_exceeded_spectrum_is_error() {
    let big = r#"{"kind":"product","factors":[{"kind":"lukasiewicz","n":20},{"kind":"lukasiewicz","n":20}]}"#;
    assert_eq!(run(&["spectrum", "--algebra", big, "--cap", "100"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_is_usage_error() {
    assert_eq!(run(&["verify", "--algebra", L2, "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn stdin_input() {
    let out = run_stdin(&["check", "--input", "-", "--format", "text"], L2XL3);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: Ł2×Ł3"));
}

#[test]
fn deterministic_output() {
    let args = ["verify", "--algebra", L2XL3, "--suite", "crt", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lattice_roundtrip() {
    let out = run(&["lattice", "--lattice", r#"{"size":4,"leq":[[0,1],[0,2],[1,3],[2,3]]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["roundtrip"], true);
    assert_eq!(v["prime_ideals"].as_array().unwrap().len(), 2);

    let m3 = run(&["lattice", "--lattice", r#"{"size":5,"leq":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]]}"#]);
    assert_eq!(m3.status.code(), Some(1));
    assert_eq!(json_of(&m3)["distributive"], false);
}
