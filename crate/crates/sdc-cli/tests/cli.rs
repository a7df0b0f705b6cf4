//! End-to-end checks of the installed binary: determinism of canonical
//! output, exit-code contract, environment fallback, and file inputs.

use std::io::Write;
use std::process::{Command, Output};

fn sdc() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sdc"));
    cmd.env_remove("SDC_SEED");
    cmd
}

fn run_ok(args: &[&str]) -> String {
    let out = sdc().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn run_fail(args: &[&str]) -> Output {
    let out = sdc().args(args).output().expect("binary runs");
    assert!(!out.status.success(), "expected failure for {args:?}");
    out
}

#[test]
fn identical_configs_give_byte_identical_json() {
    let args = [
        "exact", "--d", "2", "--state", "haar", "--trials", "400", "--seed", "9", "--output",
        "json",
    ];
    let first = sdc().args(args).output().unwrap();
    let second = sdc().args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let tail_args = [
        "tail", "--d", "2", "--d-a", "2,8", "--epsilon", "0.8", "--trials", "150", "--state",
        "product", "--seed", "3", "--output", "json",
    ];
    let first = sdc().args(tail_args).output().unwrap();
    let second = sdc().args(tail_args).output().unwrap();
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn canonical_json_reparses_to_the_same_bytes() {
    let text = run_ok(&[
        "randomized", "--d", "2", "--d-a", "8", "--ensemble-size", "16", "--trials", "200",
        "--seed", "11", "--output", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(text.trim_end()).unwrap();
    let re_rendered = sdc_cli::report::canonical_json(&value);
    assert_eq!(text.trim_end(), re_rendered);
}

#[test]
fn seed_env_fallback_and_flag_precedence() {
    let flag = run_ok(&["exact", "--d", "2", "--trials", "200", "--seed", "21", "--output", "json"]);
    let env = sdc()
        .env("SDC_SEED", "21")
        .args(["exact", "--d", "2", "--trials", "200", "--output", "json"])
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(flag.as_bytes(), env.stdout.as_slice());

    // explicit flag wins over the environment
    let overridden = sdc()
        .env("SDC_SEED", "999")
        .args(["exact", "--d", "2", "--trials", "200", "--seed", "21", "--output", "json"])
        .output()
        .unwrap();
    assert_eq!(flag.as_bytes(), overridden.stdout.as_slice());
}

#[test]
fn usage_errors_name_the_flag_and_exit_2() {
    let out = run_fail(&["exact", "--d", "2", "--trials", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--trials"), "stderr: {stderr}");

    let out = run_fail(&["exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--d"));
}

#[test]
fn domain_errors_state_the_violated_precondition_and_exit_1() {
    // ensemble output cannot hold the input: d_a * d < d^2
    let out = run_fail(&["randomized", "--d", "4", "--d-a", "2", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error:"), "stderr: {stderr}");

    // lemma hypothesis violated in bounds
    let out = run_fail(&["bounds", "--d", "4", "--epsilon", "0.2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("10/epsilon"));

    // resources below the hypothesis
    let out = run_fail(&["resources", "--l", "2", "--epsilon", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn file_state_round_trip_and_mismatch() {
    let mut state_rng = sdc_core::RandomStream::new(5, 0);
    let state = sdc_core::states::random_state(&[2, 2], &mut state_rng).unwrap();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(serde_json::to_string(&state).unwrap().as_bytes())
        .unwrap();
    let path_arg = format!("file:{}", file.path().display());

    let text = run_ok(&[
        "exact", "--d", "2", "--state", &path_arg, "--trials", "300", "--seed", "2", "--output",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(text.trim_end()).unwrap();
    assert_eq!(v["state"], serde_json::json!(path_arg));

    // partition mismatch is an input error
    let out = run_fail(&[
        "exact", "--d", "3", "--state", &path_arg, "--trials", "100",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partition"));

    // unparseable file is an input error
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    bad.write_all(b"not json").unwrap();
    let bad_arg = format!("file:{}", bad.path().display());
    let out = run_fail(&["exact", "--d", "2", "--state", &bad_arg, "--trials", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input:"));
}

#[test]
fn csv_headers_are_stable() {
    let tail = run_ok(&[
        "tail", "--d", "2", "--d-a", "2", "--epsilon", "0.8", "--trials", "150", "--seed", "1",
        "--output", "csv",
    ]);
    assert!(
        tail.starts_with("d_a,d_b,epsilon,trials,empirical_tail,half_width,analytic_bound,vacuous\n"),
        "tail csv: {tail}"
    );
    assert_eq!(tail.trim_end().lines().count(), 2);

    let exact = run_ok(&[
        "exact", "--d", "2", "--trials", "150", "--seed", "1", "--output", "csv",
    ]);
    assert!(exact.starts_with(sdc_cli::commands::EXACT_CSV_HEADER));

    let res = run_ok(&["resources", "--l", "10", "--epsilon", "1", "--output", "csv"]);
    assert!(res.starts_with(sdc_cli::commands::RESOURCES_CSV_HEADER));
}

#[test]
fn pretty_output_echoes_the_seed() {
    for args in [
        vec!["exact", "--d", "2", "--trials", "150", "--seed", "31"],
        vec!["bounds", "--d", "32", "--epsilon", "1.0", "--seed", "31"],
        vec!["resources", "--l", "10", "--epsilon", "1", "--seed", "31"],
    ] {
        let text = run_ok(&args);
        assert!(text.contains("seed: 31"), "missing seed line in {text}");
    }
}

#[test]
fn protocol_failures_are_data_not_errors() {
    // product target at d = 8 fails 7/8 of the time; exit must still be 0
    let text = run_ok(&[
        "exact", "--d", "8", "--state", "product", "--trials", "400", "--seed", "13", "--output",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(text.trim_end()).unwrap();
    let successes = v["successes"].as_u64().unwrap();
    assert!(successes < 400, "expected some failures, got {successes}/400");
}

#[test]
fn flat_fraction_tripartite_reports_convexity_gap() {
    let text = run_ok(&[
        "flat-fraction", "--d", "2", "--d-a", "8", "--ensemble-size", "12", "--epsilon", "0.8",
        "--tripartite", "--seed", "4", "--output", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(text.trim_end()).unwrap();
    let gap = v["max_convexity_gap"].as_f64().unwrap();
    assert!(gap <= 1e-9, "convexity gap {gap}");
}
