//! Contract tests for the compiled binary: exit codes, stdout/stderr
//! separation, JSON file output, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abelscope"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

#[test]
fn verify_passes_and_reports_every_section() {
    let out = run(&["verify", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("condition 1"));
    assert!(text.contains("condition 2"));
    assert!(text.contains("finitely presented: yes"));
    assert!(text.contains("[exact]"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn verify_json_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path1 = dir.path().join("a.json");
    let path2 = dir.path().join("b.json");
    let out1 = run(&["verify", "--p", "2", "--json", path1.to_str().unwrap()]);
    let out2 = run(&["verify", "--p", "2", "--json", path2.to_str().unwrap()]);
    assert_eq!(out1.status.code(), Some(0));
    assert_eq!(out2.status.code(), Some(0));
    let bytes1 = std::fs::read(&path1).unwrap();
    let bytes2 = std::fs::read(&path2).unwrap();
    assert!(!bytes1.is_empty());
    assert_eq!(bytes1, bytes2);
    assert_eq!(bytes1.last(), Some(&b'\n'));
    let parsed: serde_json::Value = serde_json::from_slice(&bytes1).unwrap();
    assert_eq!(parsed["p"], 2);
    assert_eq!(parsed["finitely_presented"], true);
}

#[test]
fn verify_rejects_a_composite_p() {
    let out = run(&["verify", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a prime"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn algebra_check_accepts_the_main_fixtures() {
    for name in ["gamma_unipotent", "abels4"] {
        let out = run(&["algebra", "check", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name} stderr: {}", stderr(&out));
        assert!(stdout(&out).contains("finitely presented: yes"));
    }
}

#[test]
fn algebra_check_fails_the_opposite_weight_pair() {
    let out = run(&["algebra", "check", fixture("abelian_pair").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("offending pair"));
    assert!(text.contains("finitely presented: no"));
}

#[test]
fn algebra_check_reports_a_jacobi_failure_as_bad_input() {
    let out = run(&["algebra", "check", fixture("jacobi_violation").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Jacobi identity fails on generators (0, 1, 2)"));
}

#[test]
fn algebra_check_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"dim\": 3,").unwrap();
    let out = run(&["algebra", "check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed"));
}

#[test]
fn algebra_check_rejects_a_missing_file() {
    let out = run(&["algebra", "check", "/nonexistent/nowhere.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn group_selftest_passes_a_small_run_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("selftest.json");
    let out = run(&[
        "group",
        "selftest",
        "--p",
        "3",
        "--trials",
        "40",
        "--seed",
        "5",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(parsed["p"], 3);
    assert_eq!(parsed["trials"], 40);
    assert_eq!(parsed["seed"], 5);
    assert_eq!(parsed["passed"], true);
    assert_eq!(parsed["checks"].as_array().unwrap().len(), 16);
    assert_eq!(parsed["literal_closure_demo"]["demonstrates_failure"], true);
}

#[test]
fn ball_z_radius_zero_is_a_single_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.json");
    let out = run(&["ball", "--preset", "z", "--radius", "0", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(parsed["vertices"], 1);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 0);
    assert_eq!(parsed["depths"], serde_json::json!([0]));
}

#[test]
fn ball_compare_detects_the_cycle_closing_up() {
    let out = run(&["ball", "--preset", "z-mod:5", "--radius", "2", "--compare", "z"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("equal: false"));
}

#[test]
fn ball_compare_passes_when_the_cycle_is_long_enough() {
    let out = run(&["ball", "--preset", "z-mod:6", "--radius", "2", "--compare", "z"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("equal: true"));
}

#[test]
fn ball_radius_above_cap_requires_override() {
    let out = run(&["ball", "--preset", "z", "--radius", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--max-radius-override"));

    let out = run(&["ball", "--preset", "z", "--radius", "7", "--max-radius-override"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("vertices: 15"));
}

#[test]
fn ball_compare_with_mismatched_generator_counts_is_bad_input() {
    let out = run(&["ball", "--preset", "z", "--radius", "1", "--compare", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("generators"));
}

#[test]
fn ball_rejects_unknown_presets_and_bad_moduli() {
    for args in [
        vec!["ball", "--preset", "q8"],
        vec!["ball", "--preset", "z-mod"],
        vec!["ball", "--preset", "z-mod:0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn usage_errors_exit_with_the_input_code() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["ball"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_prints_and_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verify"));
}

#[test]
fn gamma_quotient_ball_matches_the_group_ball_at_radius_one() {
    let out = run(&["ball", "--preset", "gamma", "--radius", "1", "--compare", "gamma-mod-mz"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("equal: true"));
}
