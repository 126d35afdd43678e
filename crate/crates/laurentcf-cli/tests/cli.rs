use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laurentcf")).args(args).output().expect("spawn laurentcf")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strs(v: &Value) -> Vec<&str> {
    v.as_array().expect("array").iter().map(|x| x.as_str().expect("string")).collect()
}

#[test]
fn expand_rational() {
    let v = json(&["expand", "--field", "Q", "--alpha", "(T^5+1)/(T^4+T^2+1)"]);
    let e = &v["outputs"]["expansion"];
    assert_eq!(strs(&e["partial_quotients"]), ["T", "-T", "-T^2+T-2", "1/3*T+1/3"]);
    assert_eq!(e["terminated"], true);
    assert_eq!(v["command"][0], "expand");
    assert_eq!(v["field"], "Q");
    assert_eq!(v["budgets"]["budget"], 200);
}

#[test]
fn pell_solution() {
    let v = json(&["pell", "--field", "Q", "--D", "T^8+T^4"]);
    assert_eq!(v["outputs"]["found"], true);
    assert_eq!(v["outputs"]["x"], "2*T^4+1");
    assert_eq!(v["outputs"]["y"], "2");
}

#[test]
fn pellianity_orders() {
    let v = json(&["pellian", "--D", "T^4+T+1", "--primes", "3,5"]);
    assert_eq!(v["outputs"]["verdict"], "NonPellian");
    let orders: Vec<(u64, u64)> = v["outputs"]["orders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| (o["p"].as_u64().unwrap(), o["torsion_order"].as_u64().unwrap()))
        .collect();
    assert_eq!(orders, [(3, 7), (5, 9)]);
}

#[test]
fn finite_field_commands() {
    let v = json(&["--field", "F5", "zaremba", "census", "--f", "T^5-T"]);
    assert_eq!(v["outputs"]["multiplicity"], 400);
    let v = json(&["--field", "F5", "sqrt", "--D", "T^2+4", "--terms", "4"]);
    assert_eq!(v["field"], "F5");
}

#[test]
fn exit_codes() {
    let parse = run(&["expand", "--alpha", "T^"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(parse.stdout.is_empty());
    let domain = run(&["--field", "F5", "pell", "--D", "T^3+1"]);
    assert_eq!(domain.status.code(), Some(1));
    assert!(domain.stdout.is_empty());
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "F8", "expand", "--alpha", "T"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "Q", "zaremba", "census", "--f", "T^3"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["--field", "F3", "zaremba", "find", "--f", "T^5", "--method", "friesen", "--prefix", "T,T+1"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn census_ignores_worker_count() {
    let base = ["--field", "F3", "zaremba", "census", "--f", "T^6+T+2"];
    let one = run(&[&["--workers", "1"], &base[..]].concat());
    let four = run(&[&["--workers", "4"], &base[..]].concat());
    let parse = |o: &Output| -> Value { serde_json::from_slice(&o.stdout).expect("JSON") };
    let (a, b) = (parse(&one), parse(&four));
    assert_eq!(a["outputs"], b["outputs"]);
}

#[test]
fn splits_counts_repeated_roots() {
    let base = ["--field", "F3", "zaremba", "find", "--f", "T^5-T^3", "--method", "splits"];
    let v = json(&[&base[..], &["--search"]].concat());
    assert_eq!(v["outputs"]["order"].as_array().unwrap().len(), 5);
    assert_eq!(run(&base).status.code(), Some(1));
    assert_eq!(run(&["--field", "F3", "zaremba", "find", "--f", "T^2+1", "--method", "splits"]).status.code(), Some(1));
}
