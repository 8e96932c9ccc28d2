use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["qnary"];
    argv.extend_from_slice(args);
    let code = qnary::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Structural equality with a relative tolerance on floats.
fn assert_json_close(actual: &Value, expected: &Value, path: &str) {
    match (actual, expected) {
        (Value::Object(a), Value::Object(e)) => {
            let ak: Vec<_> = a.keys().collect();
            let ek: Vec<_> = e.keys().collect();
            assert_eq!(ak, ek, "keys at {path}");
            for (k, v) in e {
                assert_json_close(&a[k], v, &format!("{path}.{k}"));
            }
        }
        (Value::Array(a), Value::Array(e)) => {
            assert_eq!(a.len(), e.len(), "length at {path}");
            for (i, (x, y)) in a.iter().zip(e).enumerate() {
                assert_json_close(x, y, &format!("{path}[{i}]"));
            }
        }
        (Value::Number(a), Value::Number(e)) if a.is_f64() || e.is_f64() => {
            let (a, e) = (a.as_f64().unwrap(), e.as_f64().unwrap());
            assert!((a - e).abs() <= 1e-12 * e.abs().max(1.0), "{path}: {a} vs {e}");
        }
        _ => assert_eq!(actual, expected, "at {path}"),
    }
}

fn check_golden(args: &[&str], name: &str) {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    let actual: Value = serde_json::from_str(&out).unwrap();
    assert_json_close(&actual, &golden(name), "$");
}

#[test]
fn golden_lyndon_list() {
    check_golden(&["lyndon", "list", "--q", "2", "--l", "4", "--format", "json"], "lyndon_list_q2_l4.json");
}

#[test]
fn golden_orbits() {
    check_golden(&["orbits", "--q", "2", "--m", "3", "--n", "4", "--format", "json"], "orbits_q2_m3_n4.json");
}

#[test]
fn golden_variance() {
    check_golden(&["variance", "--q", "2", "--m", "2", "--n", "4", "--samples", "0"], "variance_q2_m2_n4.json");
}

#[test]
fn randomized_subcommands_echo_seed() {
    for format in ["json", "csv", "plain"] {
        let (code, out, _) = run(&["coeffs", "--q", "2", "--m", "1", "--k", "1.5", "--seed", "31", "--format", format]);
        assert_eq!(code, 0);
        assert!(out.contains("31"), "{format}: {out}");
        let (code, out, _) = run(&["variance", "--q", "2", "--m", "1", "--n", "2", "--seed", "31", "--samples", "20", "--format", format]);
        assert_eq!(code, 0);
        assert!(out.contains("31"), "{format}: {out}");
    }
}

#[test]
fn variance_report_fields() {
    let (_, out, _) = run(&["variance", "--q", "3", "--m", "1", "--n", "3", "--samples", "0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["diag"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(v.get("mc_estimate").is_none());

    let (_, out, _) = run(&["variance", "--q", "2", "--m", "2", "--n", "4", "--samples", "10000"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["mc_estimate"].is_f64());
    assert!(v["std_error"].as_f64().unwrap() > 0.0);
    assert_eq!(v["pseudo_orbit_count"], 8);
}

#[test]
fn coeffs_are_deterministic_and_consistent() {
    let args = ["coeffs", "--q", "2", "--m", "2", "--k", "3.5", "--seed", "7", "--method", "both", "--format", "json"];
    let (code, first, _) = run(&args);
    let (_, second, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert!(v["max_delta"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["coefficients"][0], serde_json::json!([1.0, 0.0]));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qnary");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["count", "--q", "2", "--n", "4", "--mode", "both"]), 0);
    assert_eq!(code(&["lyndon", "list", "--q", "2", "--l", "0"]), 2);
    assert_eq!(code(&["factorize", "2", "--q", "2"]), 2);
    assert_eq!(code(&["orbits", "--q", "1", "--m", "1", "--n", "2"]), 2);
    assert_eq!(code(&["count", "--q", "2", "--n", "40", "--mode", "bruteforce"]), 3);
    assert_eq!(code(&["count", "--q", "2", "--n", "10", "--mode", "bruteforce", "--budget", "100"]), 3);
    assert_eq!(code(&["no-such-command"]), 2);

    let out = Command::new(bin).args(["factorize", "110", "--q", "2"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "(1)(1)(0) strict=false");
}
