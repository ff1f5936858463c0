//! End-to-end tests of the `firstexit` binary: flag parsing, exit codes,
//! output formats, and determinism of file outputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_firstexit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_stdout(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("JSON stdout")
}

#[test]
fn help_enumerates_all_flags_golden() {
    let mut combined = String::new();
    let subcommands = [
        None,
        Some("predict"),
        Some("minimize"),
        Some("simulate"),
        Some("sweep"),
        Some("verify-bounds"),
        Some("report"),
    ];
    for sub in subcommands {
        let out = match sub {
            None => run(&["--help"]),
            Some(s) => run(&[s, "--help"]),
        };
        assert_eq!(exit_code(&out), 0);
        combined.push_str(&format!("===== {} =====\n", sub.unwrap_or("(root)")));
        combined.push_str(&stdout_str(&out));
        combined.push('\n');
    }
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/help.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&golden_path, &combined).expect("write golden");
        return;
    }
    let golden = fs::read_to_string(&golden_path)
        .expect("golden help file exists; run with UPDATE_GOLDEN=1 to create it");
    assert_eq!(
        combined, golden,
        "help output drifted from tests/golden/help.txt; rerun with UPDATE_GOLDEN=1 and review"
    );
}

#[test]
fn predict_subexp_example() {
    let out = run(&["predict", "--regime", "subexp", "--alpha", "0.5", "--eps", "0.25"]);
    assert_eq!(exit_code(&out), 0);
    let v = json_stdout(&out);
    let rate = v["rate_constant"].as_f64().unwrap();
    assert!((rate - 0.270671).abs() < 1e-5, "rate {rate}");
    assert_eq!(v["log_mean_exit"].as_f64().unwrap(), 2.0);
}

#[test]
fn predict_superexp_example() {
    let out = run(&["predict", "--regime", "superexp", "--alpha", "2", "--eps", "0.25"]);
    assert_eq!(exit_code(&out), 0);
    let v = json_stdout(&out);
    let log_mean = v["log_mean_exit"].as_f64().unwrap();
    // 2 sqrt(ln 4) / 0.25 = 9.419280...
    assert!((log_mean - 9.41928).abs() < 2e-3, "log_mean {log_mean}");
}

#[test]
fn predict_bounded_requires_theta() {
    let out = run(&["predict", "--regime", "bounded", "--alpha", "0.5", "--eps", "0.05"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_str(&out).contains("--theta"));
}

#[test]
fn predict_rejects_unknown_flag() {
    let out = run(&["predict", "--regime", "subexp", "--alpha", "0.5", "--eps", "0.25", "--bogus"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn predict_measure_json_inline() {
    let out = run(&[
        "predict",
        "--regime",
        "power",
        "--measure-json",
        r#"{"kind": "power_law", "r": 2.0}"#,
        "--eps",
        "0.1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v = json_stdout(&out);
    let rate = v["rate_constant"].as_f64().unwrap();
    assert!((rate - 0.02).abs() < 1e-12, "rate {rate}");
}

#[test]
fn minimize_agrees_with_brute_force() {
    let out = run(&["minimize", "--alpha", "0.5", "--a", "1.0", "--theta", "0.4", "--k", "3"]);
    assert_eq!(exit_code(&out), 0);
    let v = json_stdout(&out);
    assert!(v["abs_diff"].as_f64().unwrap() < 1e-9);
    let closed = v["closed"].as_f64().unwrap();
    let expected = 2.0 * 0.4f64.sqrt() + 0.2f64.sqrt();
    assert!((closed - expected).abs() < 1e-12);
}

#[test]
fn minimize_infeasible_is_usage_error() {
    // k*theta < 1: no feasible configuration.
    let out = run(&["minimize", "--alpha", "0.5", "--a", "1.0", "--theta", "0.3", "--k", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn simulate_is_deterministic_given_seed() {
    let args = [
        "simulate", "--alpha", "0.5", "--eps", "0.1", "--t-max", "50", "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(stdout_str(&a), stdout_str(&b));
    let c = run(&[
        "simulate", "--alpha", "0.5", "--eps", "0.1", "--t-max", "50", "--seed", "12",
    ]);
    assert_ne!(stdout_str(&a), stdout_str(&c));
}

#[test]
fn simulate_dumps_event_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.csv");
    let out = run(&[
        "simulate",
        "--alpha",
        "0.5",
        "--eps",
        "0.1",
        "--t-max",
        "50",
        "--seed",
        "7",
        "--dump-events",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let csv = fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "path_id,time,size");
    let first = lines.next().expect("at least one jump at eps=0.1 over 50 time units");
    assert!(first.starts_with("0,"));
}

const SMALL_PLAN: &str = r#"{
  "measure": {"kind": "exp_power", "alpha": 0.5},
  "potential": "quadratic",
  "eps_grid": [0.25, 0.2, 0.15],
  "n_paths": 200,
  "mode": "pdmp_exact",
  "master_seed": 42,
  "regime": "sub_exp",
  "t_max": {"multiple_of_predicted": 20.0}
}"#;

#[test]
fn sweep_writes_csv_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.json");
    fs::write(&plan_path, SMALL_PLAN).unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "sweep",
        "--plan",
        plan_path.to_str().unwrap(),
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let csv = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    // Header plus one row per grid point.
    assert_eq!(csv.lines().count(), 1 + 3);
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("fit.json")).unwrap()).unwrap();
    assert!(fit["slope"].is_number());
    assert!(fit["r_squared"].is_number());

    // Rerun into a fresh directory: byte-identical outputs.
    let out_dir2 = dir.path().join("out2");
    let out2 = run(&[
        "sweep",
        "--plan",
        plan_path.to_str().unwrap(),
        "--output",
        out_dir2.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out2), 0);
    assert_eq!(csv, fs::read_to_string(out_dir2.join("sweep.csv")).unwrap());
}

#[test]
fn sweep_rejects_small_path_count() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.json");
    fs::write(&plan_path, SMALL_PLAN.replace("\"n_paths\": 200", "\"n_paths\": 10")).unwrap();
    let out = run(&[
        "sweep",
        "--plan",
        plan_path.to_str().unwrap(),
        "--output",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn report_summarizes_sweep_output() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.json");
    fs::write(&plan_path, SMALL_PLAN).unwrap();
    let out_dir = dir.path().join("out");
    let sweep = run(&[
        "sweep",
        "--plan",
        plan_path.to_str().unwrap(),
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&sweep), 0);
    let out = run(&["report", "--input", out_dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.contains("fit: slope"));
    assert!(text.lines().count() >= 1 + 3 + 1);
}

#[test]
fn report_missing_directory_is_usage_error() {
    let out = run(&["report", "--input", "/nonexistent/definitely-not-here"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_bounds_envelope_rejects_ct_at_least_one() {
    let out = run(&[
        "verify-bounds", "--lemma", "31", "--c", "1.5", "--horizon", "1.0", "--samples", "1000",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_bounds_envelope_small_run_passes() {
    let out = run(&[
        "verify-bounds", "--lemma", "31", "--c", "0.5", "--horizon", "1.0", "--samples", "2000",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    assert!(stdout_str(&out).contains("all"));
}

#[test]
fn verify_bounds_low_ratio_warns_but_passes() {
    let out = run(&[
        "verify-bounds",
        "--lemma",
        "33",
        "--g",
        "2",
        "--f-level",
        "2.02",
        "--horizon",
        "1.0",
        "--samples",
        "1000",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_str(&out);
    assert!(text.contains("warning"), "expected applicability warning: {text}");
    assert!(text.contains("SKIPPED"));
}

#[test]
fn verify_bounds_jump_sum_small_run_passes() {
    let out = run(&["verify-bounds", "--lemma", "34", "--samples", "2000", "--seed", "3"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
}

#[test]
fn verify_bounds_unknown_family_is_usage_error() {
    let out = run(&["verify-bounds", "--lemma", "99"]);
    assert_eq!(exit_code(&out), 2);
}
