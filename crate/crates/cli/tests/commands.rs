use std::process::Command;

use delpezzo_cli::{run, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("delpezzo").chain(args.iter().copied()).map(String::from).collect()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = run(&argv(&a));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid json")
}

#[test]
fn pair_minus_two_one() {
    let v = json(&["pair", "-d", "-2", "-r", "1"]);
    assert_eq!(v["status"], "pass");
    let c1: Vec<i64> = serde_json::from_value(v["payload"]["endpoint"]["c1"].clone()).unwrap();
    assert_eq!(c1, vec![-1, -2, 1, 1, 1, 1]);
    assert_eq!(v["payload"]["chi"], 0);
    assert_eq!(v["payload"]["chi_self"], 1);
}

#[test]
fn pair_with_chain_endpoint_matches() {
    let v = json(&["pair", "-d", "7", "-r", "5", "--show-chain"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["payload"]["endpoint"]["rank"], 5);
    assert_eq!(v["payload"]["endpoint"]["degree"], 7);
}

#[test]
fn theorem_b_three_one() {
    let v = json(&["theoremB", "-d", "3", "-r", "1"]);
    assert_eq!(v["payload"]["max_dimension"], 10);
    let alias = json(&["theorem-b", "-d", "3", "-r", "1"]);
    assert_eq!(alias["payload"], v["payload"]);
}

#[test]
fn unit_lemma_has_three_vectors() {
    let v = json(&["verify", "unit-lemma"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["payload"]["count"], 3);
}

#[test]
fn reduce_modes_all_run() {
    for mode in ["chamber", "alcove", "d5", "voronoi"] {
        let v = json(&["reduce", "--eps", "1/2,0,0,0,0,0,0,0", "--mode", mode]);
        assert_eq!(v["payload"]["mode"], mode);
    }
}

#[test]
fn gcd_violation_is_usage_error() {
    let out = run(&argv(&["pair", "-d", "2", "-r", "4"]));
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("gcd"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&argv(&["pair", "--bogus"]));
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn bad_eps_is_usage_error() {
    let out = run(&argv(&["reduce", "--eps", "1,2,3"]));
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let out = run(&argv(&["--help"]));
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("theoremB"));
}

#[test]
fn payload_is_deterministic() {
    let a = json(&["pair", "-d", "-13", "-r", "8", "--show-chain"]);
    let b = json(&["pair", "-d", "-13", "-r", "8", "--show-chain"]);
    assert_eq!(
        serde_json::to_string(&a["payload"]).unwrap(),
        serde_json::to_string(&b["payload"]).unwrap()
    );
}

#[test]
fn human_output_is_not_json() {
    let out = run(&argv(&["classify", "-k", "5", "-d", "-5", "-r", "1"]));
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("command  "));
}

#[test]
fn out_writes_file() {
    let path = std::env::temp_dir().join(format!("delpezzo-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&argv(&["--json", "--out", p, "orbit", "-a", "1", "-b", "2"]));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, out.stdout);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_delpezzo");
    let ok = Command::new(bin).args(["verify", "unit-lemma"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["pair", "-d", "0", "-r", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
