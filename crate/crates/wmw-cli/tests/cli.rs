//! End-to-end tests of the `wmw` binary: exit-code contract, golden JSON
//! reports, text/JSON agreement, and the WMW_THREADS determinism guarantee.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn wmw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wmw"))
        .args(args)
        .env_remove("WMW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn identical_samples_report_p_one() {
    let x = fixture("x.csv");
    let out = wmw(&[
        "test",
        "--x",
        x.to_str().unwrap(),
        "--y",
        x.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["p_value"].as_f64(), Some(1.0));
    assert_eq!(v["result"]["a_hat"].as_f64(), Some(0.5));
}

#[test]
fn golden_test_report_is_stable() {
    let x = fixture("x.csv");
    let y = fixture("y.csv");
    let args = [
        "test",
        "--x",
        x.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
        "--json",
    ];
    let first = wmw(&args);
    let second = wmw(&args);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "report must be byte-identical across runs"
    );
    let golden = std::fs::read(fixture("golden_test.json")).unwrap();
    assert_eq!(
        first.stdout, golden,
        "report drifted from the recorded golden file"
    );
}

#[test]
fn golden_simulate_report_is_stable() {
    let args = [
        "simulate",
        "--preset",
        "tied-normals",
        "--reps",
        "150",
        "--seed",
        "42",
        "--json",
    ];
    let first = wmw(&args);
    assert!(first.status.success());
    let golden = std::fs::read(fixture("golden_simulate.json")).unwrap();
    assert_eq!(first.stdout, golden);
}

#[test]
fn simulate_is_thread_count_invariant() {
    let args = [
        "simulate",
        "--preset",
        "equal-normals",
        "--reps",
        "120",
        "--seed",
        "9",
        "--json",
    ];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_wmw"))
            .args(args)
            .env("WMW_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn text_and_json_agree_on_values() {
    let x = fixture("x.csv");
    let y = fixture("y.csv");
    let args_base = [
        "test",
        "--x",
        x.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
    ];
    let json_out = wmw(&[&args_base[..], &["--json"]].concat());
    let text_out = wmw(&args_base);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let text = stdout(&text_out);
    let p = v["result"]["p_value"].as_f64().unwrap();
    assert!(text.contains(&format!("p-value       {p:.6}")), "{text}");
    let a = v["result"]["a_hat"].as_f64().unwrap();
    assert!(text.contains(&format!("AUC estimate  {a:.6}")), "{text}");
}

#[test]
fn grouped_single_file_mode() {
    let grouped = fixture("grouped.csv");
    let out = wmw(&[
        "test",
        "--data",
        grouped.to_str().unwrap(),
        "--group-col",
        "group",
        "--value-col",
        "measure",
        "--json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["input"]["n1"].as_u64(), Some(6));
    assert_eq!(v["input"]["n2"].as_u64(), Some(5));
    assert_eq!(v["input"]["group_x"].as_str(), Some("a"));
    assert_eq!(v["input"]["group_y"].as_str(), Some("b"));

    // explicit labels swap the roles
    let out = wmw(&[
        "test",
        "--data",
        grouped.to_str().unwrap(),
        "--group-col",
        "group",
        "--value-col",
        "measure",
        "--group-x",
        "b",
        "--group-y",
        "a",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["input"]["n1"].as_u64(), Some(5));
}

#[test]
fn bc_on_tied_data_exits_3() {
    let tx = fixture("tied_x.csv");
    let ty = fixture("tied_y.csv");
    let out = wmw(&[
        "test",
        "--x",
        tx.to_str().unwrap(),
        "--y",
        ty.to_str().unwrap(),
        "--method",
        "bc",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("ties present: BC requires continuous data"),
        "{err}"
    );
}

#[test]
fn unparseable_rows_error_unless_skipped() {
    let bad = fixture("bad.csv");
    let y = fixture("y.csv");
    let out = wmw(&[
        "test",
        "--x",
        bad.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not numeric"));

    let out = wmw(&[
        "test",
        "--x",
        bad.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
        "--skip-bad",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["input"]["n1"].as_u64(), Some(2));
    assert!(v["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w.as_str().unwrap().contains("skipped 1 unparseable rows")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wmw(&["test"]).status.code(), Some(2));
    assert_eq!(
        wmw(&["simulate", "--preset", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(wmw(&["test", "--x", "a.csv"]).status.code(), Some(2));
    assert_eq!(wmw(&["frobnicate"]).status.code(), Some(2));
    let out = wmw(&[
        "test",
        "--x",
        fixture("x.csv").to_str().unwrap(),
        "--y",
        fixture("y.csv").to_str().unwrap(),
        "--method",
        "banana",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pseudomedian_reports_enumerated_estimate() {
    // x = [1,2,3], y = [0,1,2]: all pairwise differences have median 1
    let dir = std::env::temp_dir().join("wmw_cli_psm_test");
    std::fs::create_dir_all(&dir).unwrap();
    let xp = dir.join("x.csv");
    let yp = dir.join("y.csv");
    std::fs::write(&xp, "value\n1\n2\n3\n").unwrap();
    std::fs::write(&yp, "value\n0\n1\n2\n").unwrap();
    let out = wmw(&[
        "pseudomedian",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
        "--grid-k",
        "32",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["theta_hat"].as_f64(), Some(1.0));

    // constant differences: degenerate interval, still exit 0
    std::fs::write(&xp, "value\n3\n3\n3\n").unwrap();
    std::fs::write(&yp, "value\n1\n1\n1\n").unwrap();
    let out = wmw(&[
        "pseudomedian",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["ci_lo"].as_f64(), Some(2.0));
    assert_eq!(v["result"]["ci_hi"].as_f64(), Some(2.0));
    assert!(v["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w.as_str().unwrap().contains("zero scale")));
}

#[test]
fn degenerate_variance_reports_null_statistic() {
    let dir = std::env::temp_dir().join("wmw_cli_degen_test");
    std::fs::create_dir_all(&dir).unwrap();
    let xp = dir.join("x.csv");
    let yp = dir.join("y.csv");
    std::fs::write(&xp, "value\n0\n0\n").unwrap();
    std::fs::write(&yp, "value\n1\n1\n").unwrap();
    let out = wmw(&[
        "test",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["p_value"].as_f64(), Some(0.0));
    // +infinity has no JSON representation; it serializes as null and the
    // warning explains the degenerate rule
    assert!(v["result"]["statistic"].is_null());
    assert!(v["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w.as_str().unwrap().contains("degenerate variance")));
}
