use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use resint::conditions::{sample_component, sample_generic};
use resint::{CycQ, SystemSpec};
use serde_json::Value;
use tempfile::TempDir;

fn resint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resint"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn write_spec(dir: &TempDir, name: &str, spec: &SystemSpec) -> PathBuf {
    write(dir, name, &spec.to_json().to_string())
}

fn quadratic_point(dir: &TempDir, name: &str, point: &[CycQ]) -> PathBuf {
    let spec = SystemSpec::quadratic_family().with_values(point).unwrap();
    write_spec(dir, name, &spec)
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn quantities_for_s3() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "s3.json", &SystemSpec::s3());
    let out = resint(&["quantities", "--spec", s(&spec), "--k", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_out(&out);
    let counts: Vec<u64> = doc["quantities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|q| q["term_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![4, 32, 100, 214, 388]);
}

#[test]
fn both_algorithms_agree() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "s2.json", &SystemSpec::s2());
    let out = resint(&[
        "quantities",
        "--spec",
        s(&spec),
        "--k",
        "1",
        "--alg",
        "both",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_out(&out);
    assert_eq!(doc["agree"], true);
    assert_eq!(doc["quantities"][0]["term_count"], 12);
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"S": [[1,0]]}"#);
    let out = resint(&["quantities", "--spec", s(&bad), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let missing = dir.path().join("missing.json");
    assert_eq!(
        resint(&["normalform", "--spec", s(&missing)]).status.code(),
        Some(1)
    );
}

#[test]
fn normal_form_of_zero_system() {
    let dir = TempDir::new().unwrap();
    let spec = quadratic_point(&dir, "zero.json", &vec![CycQ::zero(); 9]);
    let out = resint(&[
        "normalform",
        "--spec",
        s(&spec),
        "--order",
        "13",
        "--verify",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_out(&out);
    assert_eq!(doc["resonant_order"], 4);
    assert_eq!(doc["linear_through_order"], true);
    assert_eq!(doc["reconstruction_verified"], true);
}

#[test]
fn normal_form_without_values_exits_1() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "family.json", &SystemSpec::quadratic_family());
    assert_eq!(
        resint(&["normalform", "--spec", s(&spec)]).status.code(),
        Some(1)
    );
}

#[test]
fn component_check_passes() {
    let out = resint(&[
        "check",
        "--component",
        "1",
        "--samples",
        "2",
        "--order",
        "10",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_out(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
}

#[test]
fn generic_point_check() {
    let dir = TempDir::new().unwrap();
    let point = quadratic_point(&dir, "generic.json", &sample_generic(0));
    let out = resint(&["check", "--point", s(&point), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_out(&out);
    assert_ne!(doc["g_values"][0], "0");
    assert_eq!(doc["components_satisfied"].as_array().unwrap().len(), 0);

    let on_j5 = quadratic_point(&dir, "j5.json", &sample_component(5, 1).unwrap());
    let doc = json_out(&resint(&["check", "--point", s(&on_j5), "--json"]));
    assert!(doc["components_satisfied"]
        .as_array()
        .unwrap()
        .contains(&Value::from(5)));
}

#[test]
fn json_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "s3.json", &SystemSpec::s3());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = resint(&[
            "quantities",
            "--spec",
            s(&spec),
            "--k",
            "3",
            "--json",
            "--out",
            s(path),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let run = || {
        resint(&[
            "check",
            "--component",
            "7",
            "--samples",
            "2",
            "--seed",
            "3",
            "--order",
            "10",
            "--json",
        ])
        .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn bench_on_s3() {
    let out = resint(&["bench", "--set", "S3", "--k", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_out(&out)["rows"].as_array().unwrap().len();
    assert_eq!(rows, 4);
}

#[test]
fn invalid_thread_count_exits_1() {
    let out = Command::new(env!("CARGO_BIN_EXE_resint"))
        .args([
            "check",
            "--component",
            "1",
            "--samples",
            "1",
            "--order",
            "7",
        ])
        .env("RESINT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
