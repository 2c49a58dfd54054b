use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn catmeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catmeas")).args(args).output().expect("binary runs")
}

fn structured(command: &str, model: &str) -> Value {
    let out = catmeas(&[command, "--model", model, "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn reference() -> String {
    fixture("reference.json").to_str().unwrap().to_string()
}

fn model_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn spectral_projections_of_l1_are_coordinate_projections() {
    let v = structured("spectral", &reference());
    let projections = v["results"]["L"]["projections"].as_object().unwrap();
    for (k, (atom, p)) in projections.iter().enumerate() {
        let rows = p.as_array().unwrap();
        assert_eq!(rows.len(), 3, "{atom}");
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.as_array().unwrap().iter().enumerate() {
                let expected = if i == j && i == k { "1" } else { "0" };
                assert_eq!(x, expected, "{atom}[{i}][{j}]");
            }
        }
    }
}

#[test]
fn fubini_reports_three_equal_rationals() {
    let v = structured("fubini", &reference());
    let r = &v["results"];
    // p: 1/2 (1 - 2/3 + 1) = 2/3 and q: 1/4 (3 - 2) = 1/4
    assert_eq!(r["joint"], "11/12");
    assert_eq!(r["joint"], r["left outer"]);
    assert_eq!(r["joint"], r["right outer"]);
}

#[test]
fn witnesses_carry_both_directions() {
    let v = structured("bochner", &reference());
    let w = &v["results"]["h dmu"]["tensor witness"];
    let (fwd, bwd) = (w["forward"].as_array().unwrap(), w["backward"].as_array().unwrap());
    assert!(!fwd.is_empty() && fwd.len() == bwd.len());
    assert_eq!(w["isometric"], true);
}

#[test]
fn structured_output_has_no_floats() {
    fn no_floats(v: &Value) -> bool {
        match v {
            Value::Number(n) => n.is_u64() || n.is_i64(),
            Value::Array(a) => a.iter().all(no_floats),
            Value::Object(m) => m.values().all(no_floats),
            _ => true,
        }
    }
    assert!(no_floats(&structured("verify-all", &reference())));
}

#[test]
fn verify_all_is_deterministic() {
    let model = reference();
    let args = ["verify-all", "--model", model.as_str(), "--seed", "7"];
    let (a, b) = (catmeas(&args), catmeas(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // the seed only changes sampled checks, never the verdicts
    let other = catmeas(&["verify-all", "--model", model.as_str(), "--seed", "8"]);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn broken_model_names_the_failing_partition() {
    let out = catmeas(&["check-cosheaf", "--model", fixture("broken.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL] cosheaf K"), "{text}");
    assert!(text.contains("partition: {a} {b}"), "{text}");
    let out = catmeas(&["verify-all", "--model", fixture("broken.json").to_str().unwrap(), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failing: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert!(!failing.is_empty());
    assert_eq!(failing[0]["partition"], serde_json::json!([["a"], ["b"]]));
}

#[test]
fn dangling_reference_is_an_input_error() {
    let out = catmeas(&["verify-all", "--model", fixture("dangling.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("E004"), "{err}");
    assert!(err.contains("cosheaves.L"), "{err}");
    assert!(err.contains("line "), "{err}");
}

#[test]
fn input_errors_exit_two_with_codes() {
    let cases = [
        ("{\"algebra\": ", "E002"),
        ("{\"algebra\": {\"atoms\": [\"a\"]}, \"bogus\": 1}", "E003"),
        ("{\"algebra\": {\"atoms\": [\"a\"]}, \"spaces\": {\"B\": {\"flavor\": \"sum\", \"weights\": [\"0\"]}}}", "E005"),
        ("{\"algebra\": {\"atoms\": [\"a\"]}, \"measures\": {\"m\": {\"values\": {\"a\": \"x/0\"}}}}", "E006"),
    ];
    for (text, code) in cases {
        let f = model_file(text);
        let out = catmeas(&["stone", "--model", f.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(code), "{text}: {err}");
    }
    let out = catmeas(&["stone", "--model", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("E001"));
}

#[test]
fn element_flag_is_parsed_and_echoed() {
    let model = reference();
    let out = catmeas(&["variation", "--model", model.as_str(), "--element", "a | b", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"]["element"], "a | b");
    assert_eq!(v["results"]["element"], "{a,b}");
    // μ = (1/2, 1/3, 1/6) is positive, so its variation is its mass
    assert_eq!(v["results"]["variation"]["mu"], "5/6");
    let bad = catmeas(&["variation", "--model", model.as_str(), "--element", "a | zz"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn unknown_command_is_rejected() {
    let out = catmeas(&["frobnicate", "--model", reference().as_str()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn commands_that_do_not_apply_are_input_errors() {
    let out = catmeas(&["fubini", "--model", fixture("minimal.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = catmeas(&["stone", "--model", fixture("minimal.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn timing_only_appears_on_request() {
    let model = reference();
    let plain = catmeas(&["stone", "--model", model.as_str()]);
    assert!(!String::from_utf8(plain.stdout).unwrap().contains("elapsed"));
    let timed = catmeas(&["stone", "--model", model.as_str(), "--timing"]);
    assert!(String::from_utf8(timed.stdout).unwrap().contains("elapsed"));
}
