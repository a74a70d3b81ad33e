use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cartwl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartwl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = cartwl(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cartwl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn factorize_hamming() {
    let r = report(&["factorize", "--named", "hamming:2,4"]);
    assert_eq!(r["command"], "factorize");
    assert_eq!(r["result"]["num_factors"], 2);
    assert_eq!(r["result"]["factor_orders"], serde_json::json!([4, 4]));
    assert_eq!(r["result"]["certified"], true);
    assert_eq!(r["result"]["edge_classes"].as_array().unwrap().len(), 48);
}

#[test]
fn srg_pair_equivalent_at_two_not_three() {
    let r = report(&["equiv", "--named", "shrikhande", "--named", "hamming:2,4", "--m", "2"]);
    assert_eq!(r["result"]["equivalent"], true);
    let r = report(&["equiv", "--named", "shrikhande", "--named", "hamming:2,4", "--m", "3"]);
    assert_eq!(r["result"]["equivalent"], false);
}

#[test]
fn disconnected_edge_list_is_a_domain_error() {
    let path = temp_path("two-edges.txt");
    std::fs::write(&path, "n 4\n0 1\n2 3\n").unwrap();
    let out = cartwl(&["factorize", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("graph must be connected"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cartwl(&["factorize"]).status.code(), Some(2));
    assert_eq!(cartwl(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cartwl(&["factorize", "--named", "petersen"]).status.code(), Some(2));
    assert_eq!(cartwl(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(cartwl(&["kwl", "--named", "cycle:5", "--k", "9"]).status.code(), Some(2));
}

#[test]
fn budget_refusal_writes_nothing() {
    let path = temp_path("refused.json");
    let _ = std::fs::remove_file(&path);
    let out = cartwl(&[
        "kwl",
        "--named",
        "complete:20",
        "--k",
        "4",
        "--budget-tuples",
        "1000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("160000"));
    assert!(!path.exists());
}

#[test]
fn out_file_matches_stdout() {
    let path = temp_path("closure.json");
    let out = cartwl(&["wl-close", "--named", "cycle:6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(written["result"], printed["result"]);
    assert_eq!(printed["result"]["rank"], 4);
}

#[test]
fn payload_is_deterministic_across_threads() {
    let args = ["kwl", "--named", "random_connected:7", "--seed", "3", "--k", "3"];
    let a = report(&[&args[..], &["--threads", "1"]].concat());
    let b = report(&[&args[..], &["--threads", "2"]].concat());
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["inputs"], b["inputs"]);
}

#[test]
fn graph6_file_input() {
    let path = temp_path("k2.g6");
    std::fs::write(&path, "A_\n").unwrap();
    let r = report(&["named", "--file", path.to_str().unwrap()]);
    assert_eq!(r["result"][0]["n"], 2);
    assert_eq!(r["result"][0]["edge_count"], 1);
}

#[test]
fn product_and_tensor_check() {
    let r = report(&["product", "--named", "cycle:5", "--named", "path:3"]);
    assert_eq!(r["result"]["n"], 15);
    assert_eq!(r["result"]["edge_count"], 5 * 3 + 2 * 5);
    let r = report(&["tensor-check", "--named", "complete:3", "--named", "complete:5"]);
    assert_eq!(r["result"]["tensor_decomposition_holds"], true);
    assert_eq!(r["result"]["hypothesis_2closed"], true);
}

#[test]
fn exponentiate_complete_graphs() {
    let r = report(&["exponentiate", "--named", "complete:4", "--named", "complete:4"]);
    assert_eq!(r["result"]["rank"], 3);
    assert_eq!(r["result"]["coherent"], true);
    assert_eq!(r["result"]["symmetric_probe"]["equality"], true);
    let r = report(&["exponentiate", "--named", "complete:4", "--named", "complete:4", "--group", "trivial"]);
    assert_eq!(r["result"]["rank"], 4);
    let out = cartwl(&["exponentiate", "--named", "complete:3", "--named", "complete:4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn two_closure_and_closed() {
    let r = report(&["two-closure", "--named", "hamming:2,3"]);
    assert_eq!(r["result"]["two_closed"], true);
    let r = report(&["closed", "--named", "hamming:2,4", "--m", "3"]);
    assert_eq!(r["result"]["closed"], true);
    let out = cartwl(&["two-closure", "--named", "cycle:30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kwl_binary_colors() {
    let path = temp_path("colors.bin");
    let r = report(&["kwl", "--named", "cycle:4", "--k", "2", "--colors-out", path.to_str().unwrap()]);
    assert_eq!(r["result"]["k"], 2);
    assert_eq!(std::fs::read(&path).unwrap().len(), 16 * 4);
}

#[test]
fn verify_extension_suite() {
    let r = report(&["verify", "extension"]);
    assert_eq!(r["result"]["passed"], true);
    assert!(!r["result"]["properties"].as_array().unwrap().is_empty());
}
