use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn kordered(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kordered"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn gen(args: &[&str]) -> String {
    let mut full = vec!["gen", "--raw"];
    full.extend_from_slice(args);
    let out = kordered(&full, "");
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn connectivity_of_small_inputs() {
    let out = kordered(&["connectivity", "--format", "edge-list"], "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["connectivity"], 2);
    let k5 = kordered(&["connectivity"], "D~{");
    assert_eq!(json(&k5)["connectivity"], 4);
}

#[test]
fn gen_is_reproducible() {
    let args = ["--model", "gnp", "--n", "12", "--p", "0.9", "--seed", "1", "--floor", "7"];
    assert_eq!(gen(&args), gen(&args));
    let out = kordered(&["connectivity"], &gen(&args));
    assert!(json(&out)["connectivity"].as_u64().unwrap() >= 7);
}

#[test]
fn ordered_cycle_certificate_verifies() {
    let g = gen(&["--model", "circulant", "--n", "16", "--offsets", "1,2,3,4", "--floor", "7"]);
    let out = kordered(&["ordered-cycle", "--anchors", "0", "8", "3", "11", "--mode", "both"], &g);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["oracle"]["kind"], "ordered-cycle");
    let path = std::env::temp_dir().join(format!("kordered-cli-{}.json", std::process::id()));
    std::fs::write(&path, body["constructive"]["certificate"].to_string()).unwrap();
    let verified = kordered(&["verify", path.to_str().unwrap()], "");
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(json(&verified)["valid"], true);
    let mut forged = body["constructive"]["certificate"].clone();
    forged["anchors"] = serde_json::json!([0, 3, 8, 11]);
    std::fs::write(&path, forged.to_string()).unwrap();
    let rejected = kordered(&["verify", path.to_str().unwrap()], "");
    std::fs::remove_file(&path).unwrap();
    assert_eq!(rejected.status.code(), Some(1));
    assert_eq!(json(&rejected)["valid"], false);
}

#[test]
fn square_has_no_crossed_ordered_cycle() {
    let out = kordered(&["ordered-cycle", "--format", "edge-list", "--anchors", "0", "2", "1", "3", "--mode", "oracle"], "0 1\n1 2\n2 3\n3 0\n");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["oracle"]["status"], "none");
}

#[test]
fn linkage_or_witness() {
    let square = "0 1\n1 2\n2 3\n3 0\n";
    let out = kordered(&["linkage", "--format", "edge-list", "--terminals", "0", "2", "1", "3"], square);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["kind"], "three-planar");
    let out = kordered(&["linkage", "--format", "edge-list", "--terminals", "0", "1", "2", "3"], square);
    assert_eq!(json(&out)["kind"], "linkage");
}

#[test]
fn exhausted_budget_exits_two() {
    let g = gen(&["--model", "planar-3conn", "--n", "14", "--seed", "2"]);
    let out = kordered(&["three-planar", "--boundary", "0", "1", "2", "--budget", "0"], &g);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "inconclusive");
}

#[test]
fn discharge_on_a_plane_graph() {
    let g = gen(&["--model", "planar-3conn", "--n", "15", "--deletions", "4", "--seed", "9"]);
    let emb = kordered(&["connectivity"], &g);
    assert!(json(&emb)["connectivity"].as_u64().unwrap() >= 3);
    let out = kordered(&["discharge", "--x", "0", "--y", "1"], &g);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    let face = body["outer_face"].as_array().unwrap();
    assert!(face.contains(&Value::from(0)) && face.contains(&Value::from(1)));
    assert!(body["configuration"]["kind"].is_string());
}

#[test]
fn counterexample_search_reports_nothing_on_dense_graphs() {
    let out = kordered(&["search-counterexample", "--model", "gnp", "--n", "8", "--p", "1", "--budget", "2"], "");
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["instances"], 2);
    assert_eq!(body["findings"].as_array().unwrap().len(), 0);
}

#[test]
fn malformed_input_is_an_error() {
    let out = kordered(&["connectivity"], "garbage!!");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));
    let out = kordered(&["ordered-cycle", "--anchors", "0", "1", "2", "9"], "C~");
    assert_eq!(out.status.code(), Some(1));
}
