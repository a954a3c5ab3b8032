//! End-to-end runs of the `zetakit` binary: report contents, exit codes,
//! and byte-for-byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn zetakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetakit")).args(args).output().expect("binary runs")
}

fn system_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zetakit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn zeta_of_the_affine_line() {
    let path = system_file("line.json", r#"{"p":3,"n":1,"polys":[]}"#);
    let out = zetakit(&["zeta", "--system", path.to_str().unwrap(), "--terms", "4", "--reconstruct", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["results"]["counts"], serde_json::json!([3, 9, 27, 81]));
    // ζ = 1/(1 − 3t).
    assert_eq!(r["results"]["zeta"]["numerator"], serde_json::json!(["1"]));
    assert_eq!(r["results"]["zeta"]["denominator"], serde_json::json!(["1", "-3"]));
    assert_eq!(r["schema"], "zetakit-report/1");
}

#[test]
fn malformed_system_exits_with_input_error() {
    let path = system_file("bad.json", "{\"p\": 3,\n \"n\": }");
    let out = zetakit(&["count", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "no location in: {err}");
}

#[test]
fn composite_modulus_is_rejected() {
    let path = system_file("composite.json", r#"{"p":4,"n":1,"polys":[]}"#);
    let out = zetakit(&["count", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inclusion_exclusion_campaign_passes() {
    let out = zetakit(&["verify", "--campaign", "inclusion-exclusion", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["verdict"], "pass");
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let args = ["verify", "--campaign", "bound-invariants", "--seed", "11", "--count", "50"];
    let a = zetakit(&args);
    let b = zetakit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bounds_for_an_empty_variety() {
    let path = system_file("quadric.json", r#"{"p":3,"n":3,"polys":[{"terms":[{"c":1,"e":[2,0,0]},{"c":1,"e":[0,2,0]}]}]}"#);
    let out = zetakit(&["bounds", "--system", path.to_str().unwrap(), "--dim", "-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["verdict"], "empty-variety");
}

#[test]
fn table_output_is_flat() {
    let path = system_file("hyperbola.json", r#"{"p":5,"n":2,"polys":[{"terms":[{"c":1,"e":[1,1]},{"c":-1,"e":[0,0]}]}]}"#);
    let out = zetakit(&["--format", "table", "count", "--system", path.to_str().unwrap(), "--m", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() > 1);
    assert!(!text.trim_start().starts_with('{'));
}
