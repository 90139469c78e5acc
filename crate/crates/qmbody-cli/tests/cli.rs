use std::process::{Command, Output};

use qmbody::exactmath::{format_rational, parse_rational};
use serde_json::Value;

fn qmbody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmbody")).args(args).output().expect("binary runs")
}

fn qmbody_with_workers(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmbody"))
        .args(args)
        .env("QMBODY_WORKERS", workers)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn vertices(v: &Value) -> Vec<(String, String)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_str().unwrap().to_string(), p[1].as_str().unwrap().to_string()))
        .collect()
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn cluster_listing() {
    let o = qmbody(&["cluster", "--s", "7/2", "--format", "text"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let points: Vec<&str> = text.lines().filter(|l| l.starts_with('p')).collect();
    assert_eq!(points.len(), 5);
    assert!(points[4].contains("satellite"));

    let one = stdout(&qmbody(&["cluster", "--s", "1"]));
    assert_eq!(one.lines().filter(|l| l.starts_with('p')).count(), 1);
}

#[test]
fn cluster_svg_has_version_header() {
    let o = qmbody(&["cluster", "--s", "48/7", "--format", "svg"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("<!-- qmbody "));
    assert!(text.contains("<svg"));
}

#[test]
fn conic_body_as_json() {
    let o = qmbody(&["body", "--d", "2", "--s", "3", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v[0];
    assert_eq!(vertices(&r["normalized"]["vertices"]), pairs(&[("0", "0"), ("2", "0"), ("3/2", "1/2")]));
    assert_eq!(r["routes_agree"], Value::Bool(true));
}

#[test]
fn line_body_in_text() {
    let o = qmbody(&["body", "--d", "1", "--s", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("closed form  (0, 0) (1, 0) (5, 1)"));
}

#[test]
fn cubic_body_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.svg");
    let o = qmbody(&["body", "--d", "3", "--s", "48/7", "--svg", path.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("(144/55, 21/55)"));
    assert!(svg.contains("(55/21, 1/3)"));
}

#[test]
fn conic_sweep_finds_one_mutation() {
    let o = qmbody(&["sweep", "--d", "2", "--from", "1", "--to", "5", "--step", "1/20", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let at: Vec<&str> = v["mutations"].as_array().unwrap().iter().map(|m| m["s0"].as_str().unwrap()).collect();
    assert_eq!(at, vec!["2"]);
    assert_eq!(v["samples"].as_array().unwrap().len(), 81);
}

#[test]
fn empty_sweep() {
    let o = qmbody(&["sweep", "--from", "3", "--to", "2", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["samples"].as_array().unwrap().is_empty());
    assert!(v["mutations"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    for format in ["--json", "--csv"] {
        let args = ["sweep", "--d", "3", "--from", "6", "--to", "7", "--step", "1/16", format];
        let a = qmbody_with_workers(&args, "1");
        let b = qmbody_with_workers(&args, "4");
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn emitted_rationals_round_trip() {
    let o = qmbody(&["sweep", "--d", "3", "--from", "6", "--to", "7", "--step", "1/8", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for sample in v["samples"].as_array().unwrap() {
        for key in ["s", "muhat", "lambda"] {
            let text = sample[key].as_str().unwrap();
            if !text.contains("sqrt") {
                assert_eq!(format_rational(&parse_rational(text).unwrap()), text);
            }
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(qmbody(&["body", "--s", "1/2"]).status.code(), Some(1));
    assert_eq!(qmbody(&["sweep", "--from", "1", "--to", "2", "--step", "0"]).status.code(), Some(1));
    assert_eq!(qmbody(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qmbody(&["--help"]).status.code(), Some(0));
    assert_eq!(qmbody(&["cluster", "--s", "100000000000"]).status.code(), Some(2));
    assert_eq!(qmbody_with_workers(&["sweep", "--from", "1", "--to", "2"], "zero").status.code(), Some(1));
}

#[test]
fn verify_subset_and_fault_injection() {
    let o = qmbody(&["verify", "--filter", "Newton"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS  3"));
    let o = qmbody(&["verify", "--filter", "1", "--inject-fault", "weight"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL  1"));
    assert_eq!(qmbody(&["verify", "--filter", "no such criterion"]).status.code(), Some(1));
}
