use std::path::PathBuf;
use std::process::{Command, Output};

use hornred::RationalExpr;
use serde_json::Value;

fn hornred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hornred")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect()
}

fn assert_golden(args: &[&str], name: &str) {
    let out = hornred(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(squash(&stdout(&out)), squash(&golden(name)), "{args:?}");
}

#[test]
fn reductions_match_golden_output() {
    assert_golden(&["reduce", "G1", "--shift", "-1,-1,0", "--params", "a,b1,b2"], "example1_g1.txt");
    assert_golden(&["reduce", "H1", "--shift", "-1,0,0,1", "--params", "a,b,c,d"], "example2_h1.txt");
    assert_golden(&["reduce", "H1c", "--shift", "0,1,1", "--params", "a,b,c"], "example3_h1c.txt");
    assert_golden(
        &["reduce", "H1c", "--shift", "0,1,1", "--params", "a,b,c", "--format", "json"],
        "example3_h1c.json",
    );
    assert_golden(&["reduce", "G1", "--shift", "0,0,0"], "zero_shift_g1.txt");
}

#[test]
fn json_coefficients_parse_back_to_the_text_form() {
    let json: Value = serde_json::from_str(&stdout(&hornred(&[
        "reduce", "H1", "--shift", "-1,0,0,1", "--format", "json",
    ])))
    .unwrap();
    let text = stdout(&hornred(&["reduce", "H1", "--shift", "-1,0,0,1"]));
    for key in ["q0", "q1", "q2", "q12"] {
        let s = json["coefficients"][key].as_str().unwrap();
        let parsed: RationalExpr = s.parse().unwrap();
        assert_eq!(parsed.to_string(), s);
        assert!(text.contains(s), "{key} missing from text output");
    }
    assert_eq!(json["new_params"][3], "d + 1");
}

#[test]
fn cas_output_names_every_coefficient() {
    let out = stdout(&hornred(&["reduce", "H1", "--shift", "-1,0,0,1", "--format", "cas"]));
    for key in ["Q0 ->", "Q1 ->", "Q2 ->", "Q12 ->", "NewParameters -> {a - 1, b, c, d + 1}"] {
        assert!(out.contains(key), "{key} missing from {out}");
    }
}

#[test]
fn list_and_describe() {
    let out = hornred(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 30);
    let json: Value = serde_json::from_str(&stdout(&hornred(&["list", "--format", "json"]))).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 30);

    let gamma2 = hornred(&["describe", "Gamma2"]);
    assert_eq!(gamma2.status.code(), Some(0));
    assert!(stdout(&gamma2).contains("z1*z2"));
    let h4c = hornred(&["describe", "H4c", "--format", "json"]);
    assert_eq!(h4c.status.code(), Some(0));
    let _: Value = serde_json::from_str(&stdout(&h4c)).unwrap();
}

#[test]
fn eval_reports_a_converged_value() {
    let out = hornred(&["eval", "G2", "--params", "1/3,1/5,1/7,2/9", "--z", "0.05,0.07"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(!stdout(&out).is_empty());
}

#[test]
fn verify_passes_at_sampled_points() {
    let out = hornred(&["verify", "G1", "--shift", "-1,-1,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = hornred(&["verify", "H1c", "--shift", "0,1,1", "--params", "1/3,2/7,5/11", "--z", "0.03,0.02"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("point")).count(), 1);
}

#[test]
fn tolerance_below_the_precision_budget_fails() {
    let out = hornred(&["verify", "G1", "--shift", "-1,-1,0", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(5), "{}", stdout(&out));
}

#[test]
fn zero_shift_verifies_exactly() {
    let out = hornred(&["verify", "G1", "--shift", "0,0,0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for point in json["points"].as_array().unwrap() {
        assert_eq!(point["relative_error"], 0.0);
        assert_eq!(point["status"], "pass");
    }
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(hornred(&["reduce", "Foo", "--shift", "0"]).status.code(), Some(4));
    assert_eq!(hornred(&["reduce", "G1", "--shift", "-1,-1,0", "--params", "2,b1,b2"]).status.code(), Some(3));
    assert_eq!(hornred(&["reduce", "G1", "--shift", "-1,0"]).status.code(), Some(2));
    assert_eq!(hornred(&["reduce", "G1", "--shift", "x,0,0"]).status.code(), Some(2));
    assert_eq!(hornred(&["reduce", "G1", "--shift", "0,0,0", "--params", "a,b1,(("]).status.code(), Some(2));
}
