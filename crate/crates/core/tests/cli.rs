//! End-to-end runs of the command-line binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn toricbv(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toricbv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const P2: &str = r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [2, 0]]}"#;

#[test]
fn dims_of_projective_plane_from_stdin() {
    let o = toricbv(&["--format", "machine", "dims"], Some(P2));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["dimensions"], serde_json::json!([1, 8, 10]));
}

#[test]
fn bv_on_projective_plane_lists_inconsistent_rows() {
    let o = toricbv(&["--format", "machine", "bv", "@P2"], None);
    assert_eq!(o.status.code(), Some(0));
    let bv = &json(&o)["bv"];
    assert_eq!(bv["exists"], false);
    assert_eq!(bv["inconsistent_rows"], serde_json::json!([0, 1, 2]));
    assert_eq!(bv["certificate"], serde_json::json!(["-1/3", "-1/3", "-1/3"]));
}

#[test]
fn bv_with_chosen_delta() {
    let o = toricbv(&["--format", "machine", "bv", "@blowup16", "--delta", "1,1"], None);
    assert_eq!(o.status.code(), Some(0));
    let ops = json(&o)["bv"]["operators"].clone();
    assert_eq!(ops.as_array().unwrap().len(), 1);
    assert_eq!(ops[0]["delta"], "(1,1)");
    let bad = toricbv(&["bv", "@P1", "--delta", "-1"], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not admissible"));
}

#[test]
fn check_on_blowup_passes() {
    let o = toricbv(&["check", "@blowup16"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("[PASS] order-2 identity"));
}

#[test]
fn machine_output_is_reproducible() {
    let a = toricbv(&["--format", "machine", "check", "@P3", "--seed", "5"], None);
    let b = toricbv(&["--format", "machine", "check", "@P3", "--seed", "5"], None);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("timings").is_none());
    let t = toricbv(&["--format", "machine", "--timings", "dims", "@P3"], None);
    assert!(json(&t)["timings"].is_object());
}

#[test]
fn bracket_command() {
    let o = toricbv(&["--format", "machine", "bracket", "chi(1)*e1", "chi(-1)*e1", "@P1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["bracket"]["bracket"], "-2*chi(0)*e1");
    let outside = toricbv(&["bracket", "chi(2)*e1", "chi(0)*e1", "@P1"], None);
    assert_eq!(outside.status.code(), Some(2));
    let torus = toricbv(&["--format", "machine", "bracket", "--torus", "chi(2)*e1", "chi(0)*e1", "@P1"], None);
    assert_eq!(json(&torus)["bracket"]["bracket"], "-2*chi(2)*e1");
}

#[test]
fn input_errors_exit_with_two() {
    let o = toricbv(&["validate"], Some("{\n  \"dim\": 2,\n  \"rays\": [[1, 0]\n}"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let o = toricbv(&["validate"], Some(r#"{"dim": 2, "rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]}"#));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gcd 2"));

    let o = toricbv(&["validate"], Some(r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 7]]}"#));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("index 7"));

    assert_eq!(toricbv(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(toricbv(&["dims", "/nonexistent/fan.json"], None).status.code(), Some(2));
}

#[test]
fn incomplete_fan_fails_validation() {
    let doc = r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2]]}"#;
    let o = toricbv(&["validate"], Some(doc));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("complete: false"));
}

#[test]
fn corpus_runs_every_bundled_fan() {
    let o = toricbv(&["--format", "machine", "corpus"], None);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = json(&o)["corpus"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["fan"]["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names, ["P1", "P2", "P3", "P1xP1", "F0", "F1", "F2", "F3", "dP6", "blowup16"]);
}
