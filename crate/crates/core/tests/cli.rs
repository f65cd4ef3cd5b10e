use std::io::Write;
use std::process::{Command, Output};

use hkr_verifier::verify::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkr-verify"))
        .args(args)
        .env_remove("VERIFIER_MAX_DEGREE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn reports(o: &Output) -> Vec<VerificationReport> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

#[test]
fn series_canonical_text() {
    let o = run(&["series", "todd", "--weight", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1 + 1/2*c1 + 1/12*c1^2 + 1/12*c2");
    assert_eq!(stdout(&run(&["series", "sqrt-todd", "--weight", "1"])).trim(), "1 + 1/4*c1");
    assert_eq!(stdout(&run(&["series", "ch", "--rank", "1", "--weight", "0"])).trim(), "1");
}

#[test]
fn series_json_and_errors() {
    let o = run(&["series", "todd", "--weight", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v.is_object() || v.is_array());
    assert_eq!(run(&["series", "genus"]).status.code(), Some(2));
    assert_eq!(run(&["series", "todd", "--weight", "99"]).status.code(), Some(2));
}

#[test]
fn verify_lie_sl2_standard_passes() {
    let o = run(&["verify-lie", "--algebra", "sl2", "--rep", "standard", "--max-degree", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = reports(&o);
    assert!(!r.is_empty());
    assert!(r.iter().all(|r| r.witness.is_none()));
    let suites: std::collections::BTreeSet<_> = r.iter().map(|r| r.suite.as_str()).collect();
    for s in ["lie-diagram", "phi-theta", "invariants", "adjunction", "enveloping-relation"] {
        assert!(suites.contains(s), "missing {s}");
    }
}

#[test]
fn verify_lie_abelian_zero_passes() {
    let o = run(&["verify-lie", "--algebra", "abelian2", "--rep", "zero", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_structure_constants_name_the_triple() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    // [a, b] = a and [b, c] = b violate Jacobi on (a, b, c)
    write!(
        f,
        r#"{{"dim": 3, "labels": ["a", "b", "c"], "brackets": [
            {{"i": 0, "j": 1, "coeffs": ["1", "0", "0"]}},
            {{"i": 1, "j": 2, "coeffs": ["0", "1", "0"]}}]}}"#
    )
    .unwrap();
    let o = run(&["verify-lie", "--algebra", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Jacobi") && err.contains("(a, b, c)"), "{err}");
}

#[test]
fn unknown_algebra_and_representation_are_usage_errors() {
    assert_eq!(run(&["verify-lie", "--algebra", "so5"]).status.code(), Some(2));
    assert_eq!(run(&["verify-lie", "--algebra", "sl2", "--rep", "det"]).status.code(), Some(2));
}

#[test]
fn degree_cap_and_override() {
    assert_eq!(run(&["verify-lie", "--algebra", "abelian2", "--max-degree", "9"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_hkr-verify"))
        .args(["verify-lie", "--algebra", "abelian2", "--rep", "zero", "--max-degree", "7"])
        .env("VERIFIER_MAX_DEGREE", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_hkr-verify"))
        .args(["verify-lie", "--algebra", "abelian2", "--rep", "zero"])
        .env("VERIFIER_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("/d02") && !stdout(&o).contains("/d03"));
}

#[test]
fn verify_hodge_small_cases() {
    let o = run(&["verify-hodge", "--dim", "1", "--seed", "0", "--cases", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["verify-hodge", "--dim", "9"]).status.code(), Some(2));
    let o = run(&["verify-hodge", "--dim", "2", "--seed", "3", "--cases", "5", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ") || l.starts_with("SKIP ")));
}

#[test]
fn report_stream_is_sorted() {
    let o = run(&["verify-hodge", "--dim", "2", "--seed", "1", "--cases", "12"]);
    let r = reports(&o);
    let keys: Vec<_> = r.iter().map(|r| (r.suite.clone(), r.instance.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
