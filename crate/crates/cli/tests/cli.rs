use std::process::{Command, Output};

use serde_json::Value;

fn lozenge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lozenge")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = lozenge(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", text, "JSON does not round-trip");
    value
}

#[test]
fn apply_first_step() {
    assert_eq!(json(&["apply", "--op", "H1", "--triple", "1,2,3"])["result"], serde_json::json!([5, 2, 3]));
}

#[test]
fn word_orders() {
    let exec = json(&["word", "--word", "13211", "--triple", "1,2,3"]);
    assert_eq!(exec["result"], serde_json::json!([5, 9, 5]));
    let composed = json(&["word", "--word", "11231", "--paper-order", "--triple", "1,2,3"]);
    assert_eq!(composed, exec);
}

#[test]
fn census_values() {
    let v = json(&["census", "--c", "100"]);
    assert_eq!(v["min_weight"], -3300);
    assert_eq!(v["negative_count"], 11946);
    assert!((v["ratio"].as_f64().unwrap() - 0.98793).abs() < 1e-5);
}

#[test]
fn loeschian_membership() {
    assert_eq!(json(&["loeschian", "--value", "2024"])["loeschian"], false);
    assert_eq!(json(&["loeschian", "--value", "2023"])["loeschian"], true);
}

#[test]
fn classify_and_length() {
    let v = json(&["classify", "--triple", "0,0,5"]);
    assert_eq!(v["germ"], "110");
    assert_eq!(v["offset"], -7);
    let v = json(&["length", "--triple", "0,1,1", "--value", "2023"]);
    assert_eq!(v["length"], 99);
    assert_eq!(v["word"].as_str().unwrap().len(), 99);
}

#[test]
fn zigzag_and_weight() {
    let v = json(&["zigzag", "--c", "0", "--a", "0", "--n", "2"]);
    assert_eq!(v["result"], serde_json::json!([14, 14, 8]));
    let v = json(&["zigzag", "--c", "100"]);
    assert_eq!(v["offset"], -3300);
    assert_eq!(json(&["weight", "--base", "4,7,5", "--m", "1", "--n", "1"])["weight"], 9);
}

#[test]
fn density_csv() {
    let out = lozenge(&["density", "--germ", "000", "--p", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "l,count,density_num,density_den");
    assert_eq!(rows[4], "3,1,1,25");
    assert_eq!(rows[1], "0,6,6,25");
}

#[test]
fn region_csv_and_growth() {
    let closed = lozenge(&["region", "--base", "3,-2,8", "--radius", "6", "--format", "csv"]);
    let grown = lozenge(&["region", "--base", "3,-2,8", "--radius", "6", "--grow", "--format", "csv"]);
    assert!(closed.status.success() && grown.status.success());
    assert_eq!(closed.stdout, grown.stdout);
    assert_eq!(String::from_utf8(closed.stdout).unwrap().lines().count(), 1 + 13 * 13);
}

#[test]
fn render_is_stable() {
    let args = ["render", "--base", "9,2,6", "--radius", "4", "--modulus", "23", "--labels", "--format", "text"];
    let a = lozenge(&args);
    let b = lozenge(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("data-class=").count(), 23);
}

#[test]
fn bigint_avoids_overflow() {
    let max = i64::MAX.to_string();
    let triple = format!("0,{max},{max}");
    let narrow = lozenge(&["apply", "--op", "H1", "--triple", &triple]);
    assert_eq!(narrow.status.code(), Some(3));
    let wide = json(&["apply", "--op", "H1", "--triple", &triple, "--bigint"]);
    assert_eq!(wide["result"][0], "18446744073709551615");
}

#[test]
fn exit_codes() {
    assert_eq!(lozenge(&["apply", "--op", "H4", "--triple", "1,2,3"]).status.code(), Some(2));
    assert_eq!(lozenge(&["apply", "--op", "H1", "--triple", "1,2"]).status.code(), Some(2));
    assert_eq!(lozenge(&["census", "--c", "100", "--bogus"]).status.code(), Some(2));
    assert_eq!(lozenge(&["density", "--germ", "000", "--p", "9"]).status.code(), Some(2));
    assert_eq!(lozenge(&["census", "--c", "100", "--cap", "50"]).status.code(), Some(3));
    let capped = Command::new(env!("CARGO_BIN_EXE_lozenge"))
        .args(["density", "--germ", "011", "--p", "11"])
        .env("LOZENGE_SWEEP_CAP", "7")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn verify_scopes() {
    let v = json(&["verify", "--scope", "identities", "--samples", "2000", "--seed", "9"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 20);
    let v = json(&["verify", "--scope", "densities", "--pmax", "97"]);
    assert_eq!(v["passed"], true);
    let out = lozenge(&["verify", "--scope", "all", "--pmax", "200"]);
    assert_eq!(out.status.code(), Some(0));
}
