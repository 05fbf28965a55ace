//! Exit-code and interface contract of the binary.
//!
//! 0 = success, 1 = invariant violation / failed verification /
//! operational error, 2 = parse error, 64 = usage error.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../rulekit/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn rulekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rulekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn validate_clean_fixture_exits_zero() {
    let out = rulekit(&[
        "validate",
        "--schema",
        &fixture("toy.schema"),
        &fixture("toy.rules"),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok: 3 rules"));
}

#[test]
fn validate_reports_parse_errors_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rules");
    std::fs::write(&bad, "rule NotCar : R1 :- XX = 1\n").unwrap();
    let out = rulekit(&[
        "validate",
        "--schema",
        &fixture("toy.schema"),
        bad.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("1:21"), "stderr: {stderr}");
    assert!(stderr.contains("unknown attribute"));
}

#[test]
fn validate_reports_invariant_violations() {
    // The class Bus is not declared by the schema.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rules");
    std::fs::write(&bad, "rule Bus : R1 :- P = 2\n").unwrap();
    let out = rulekit(&[
        "validate",
        "--schema",
        &fixture("toy.schema"),
        bad.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown class"));
}

#[test]
fn unknown_fixture_is_a_usage_error() {
    let out = rulekit(&["report", "--fixture", "nonsense"]);
    assert_eq!(exit_code(&out), 64);
}

#[test]
fn data_guard_without_dataset_is_a_usage_error() {
    let out = rulekit(&[
        "reduce",
        "--schema",
        &fixture("toy.schema"),
        "--guard",
        "data",
        &fixture("toy.rules"),
    ]);
    assert_eq!(exit_code(&out), 64);
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = rulekit(&["evaluate", &fixture("toy.rules")]);
    assert_eq!(exit_code(&out), 64);
}

#[test]
fn verify_invalid_reduction_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let tampered = dir.path().join("tampered.rules");
    std::fs::write(
        &tampered,
        "rule NotCar : R1_1 :- W = LE3\nrule NotCar : R1_2 :- P > 10\nrule Car : R2_1 :- W = GE4\n",
    )
    .unwrap();
    let out = rulekit(&[
        "verify",
        "--schema",
        &fixture("toy.schema"),
        &fixture("toy.rules"),
        tampered.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("invalid"));
}

#[test]
fn verify_valid_reduction_exits_zero() {
    let out = rulekit(&[
        "verify",
        "--schema",
        &fixture("toy.schema"),
        "--dataset",
        &fixture("toy.csv"),
        &fixture("toy.rules"),
        &fixture("toy_reduced.rules"),
    ]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict              valid"));
    assert!(stdout.contains("4/5 = 0.8000 -> 5/5 = 1.0000"));
}

#[test]
fn reduce_output_round_trips_through_interchange() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("reduced.json");
    let out = rulekit(&[
        "reduce",
        "--schema",
        &fixture("toy.schema"),
        "--format",
        "interchange",
        "-o",
        out_path.to_str().unwrap(),
        &fixture("toy.rules"),
    ]);
    assert_eq!(exit_code(&out), 0);

    // The interchange document is self-describing: validate it directly.
    let out = rulekit(&["validate", out_path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);

    let text = std::fs::read_to_string(&out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["kind"], "rule_system");
    assert_eq!(doc["rules"].as_array().unwrap().len(), 3);
}

#[test]
fn evaluate_emits_interchange_metrics() {
    let out = rulekit(&[
        "evaluate",
        "--schema",
        &fixture("toy.schema"),
        "--dataset",
        &fixture("toy.csv"),
        "--space",
        "--format",
        "interchange",
        &fixture("toy.rules"),
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(doc["kind"], "metrics");
    assert_eq!(doc["metrics"]["accuracy"]["num"], 4);
    assert_eq!(doc["metrics"]["accuracy"]["den"], 5);
    assert_eq!(doc["space_coverage"]["num"], 30);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    assert_eq!(doc["rows"][4]["verdict"], "uncovered");
}

#[test]
fn explicit_column_order_replaces_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("toy_noheader.csv");
    std::fs::write(&csv, "2,LE3,NotCar\n1,LE3,NotCar\n").unwrap();
    let out = rulekit(&[
        "evaluate",
        "--schema",
        &fixture("toy.schema"),
        "--dataset",
        csv.to_str().unwrap(),
        "--columns",
        "P,W,class",
        &fixture("toy.rules"),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("rows                 2"));
}

#[test]
fn reduce_summary_goes_to_stderr_and_system_to_stdout() {
    let out = rulekit(&[
        "reduce",
        "--schema",
        &fixture("toy.schema"),
        &fixture("toy.rules"),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 removals"));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("rule NotCar : R1_1 :- W = LE3"));
    assert!(stdout.contains("schema {"));
}
