use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prelie"))
}

fn data(name: &str) -> String {
    let local = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    if local.exists() {
        return local.to_string_lossy().into_owned();
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("prelie-cli-{}-{name}", std::process::id()))
}

#[test]
fn levelization_listing() {
    let o = run(&["trees", "levelizations", "--vertices", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(* (*) (* (*)))  n_t=3"), "{out}");
    assert!(!out.contains("FAIL"));
    let o = run(&["trees", "enumerate", "--vertices", "5"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with('(')).count(), 9);
}

#[test]
fn bch_order_two() {
    let o = run(&["prelie", "bch", "--order", "2", "x", "y", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines, ["1 (x)", "1 (y)", "1/2 (x (y))", "-1/2 (y (x))"]);
}

#[test]
fn exp_magnus_round_trip_through_files() {
    let out = temp("exp.series");
    let o = run(&["prelie", "exp", &data("lambda.series"), "--truncation", "5", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[pass]"));
    // magnus takes a = g - 1
    let g = std::fs::read_to_string(&out).unwrap();
    let a: String = g.lines().filter(|l| !l.ends_with(" ()")).map(|l| format!("{l}\n")).collect();
    std::fs::write(&out, a).unwrap();
    let o = run(&["prelie", "magnus", out.to_str().unwrap(), "--truncation", "5", "--quiet"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1 (x)\n1/2 (y (x))\n");
    let _ = std::fs::remove_file(out);
}

#[test]
fn gauge_act_on_series() {
    let o = run(&["prelie", "gauge-act", "--order", "4", &data("lambda.series"), "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass] (e^λ ⋆ α) ⊛ e^{-λ} = e^{ad_λ}(α)"));
}

#[test]
fn malformed_series_exits_two_with_position() {
    let path = temp("bad.series");
    std::fs::write(&path, "1 (x)\n1/2 (y (x)\n").unwrap();
    let o = run(&["prelie", "exp", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at byte"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let _ = std::fs::remove_file(path);
    let o = run(&["prelie", "exp", "two words"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn multicomplex_verdicts() {
    let o = run(&["multicomplex", "mc-check", &data("acyclic_tower.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["multicomplex", "mc-check", &data("non_mc_tower.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], false);
    assert_eq!(v["checks"][0]["detail"], "fails at weight 1");

    let o = run(&["multicomplex", "trivialize", &data("acyclic_tower.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"]["lambda"]["operators"].is_array());

    let o = run(&["multicomplex", "trivialize", &data("obstructed_tower.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("obstructed at weight 1"));
}

#[test]
fn multicomplex_conjugate_output_reparses() {
    let out = temp("conj.json");
    let o = run(&[
        "multicomplex",
        "conjugate",
        &data("acyclic_tower.json"),
        "--gauge",
        &data("gauge_tower.json"),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let o = run(&["multicomplex", "mc-check", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let _ = std::fs::remove_file(out);
}

#[test]
fn ainf_transfer_reports_all_checks() {
    let out = temp("transfer.json");
    let o = run(&[
        "ainf",
        "transfer",
        &data("massey.json"),
        &data("massey_contraction.json"),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = stdout(&o);
    assert_eq!(report.lines().filter(|l| l.starts_with("[pass]")).count(), 7, "{report}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let beta = prelie::ainf::json::element_from_json(&v["beta"], -1, "beta").unwrap();
    assert!(beta.mc_check().unwrap().is_ok());
    assert_eq!(beta.first_nonzero(), Some(3));
    let round = prelie::ainf::json::element_to_json(&beta);
    assert_eq!(prelie::ainf::json::element_from_json(&round, -1, "beta").unwrap(), beta);
    let _ = std::fs::remove_file(out);
}

#[test]
fn ainf_mc_check_and_gauge_act() {
    let o = run(&["ainf", "mc-check", &data("massey.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["ainf", "gauge-act", &data("massey_gauge.json"), &data("massey.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let moved = prelie::ainf::json::element_from_json(&v["result"], -1, "moved").unwrap();
    assert!(moved.mc_check().unwrap().is_ok());
    assert!(!moved.component(3).is_zero());
}

#[test]
fn ainf_gauge_triviality_verdicts() {
    let o = run(&[
        "ainf",
        "trivialize",
        &data("massey.json"),
        "--contraction",
        &data("massey_contraction.json"),
        "--truncation",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("nonzero operation of arity 3"));
    let o = run(&["ainf", "trivialize", &data("formal.json"), "--contraction", &data("formal_contraction.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn malformed_json_exits_two() {
    let path = temp("bad.json");
    std::fs::write(&path, "{\"space\": {\"dims\": {\"0\": 1}},\n \"truncation\": 2, \"operations\": [}").unwrap();
    let o = run(&["ainf", "mc-check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at byte"), "{}", stderr(&o));
    let _ = std::fs::remove_file(path);
    let o = run(&["ainf", "mc-check", "/definitely/missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("i/o error"));
}
