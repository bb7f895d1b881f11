use std::path::PathBuf;
use std::process::{Command, Output};

use qmc::core::json::MatrixJson;
use qmc::ergodic::{analyze, ErgodicTol};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn qmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmc")).args(args).output().expect("run qmc")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_error(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "stderr: {text}");
    let v: Value = serde_json::from_str(lines[0]).expect("stderr is JSON");
    assert!(v["kind"].is_string() && v["detail"].is_string());
    v
}

/// Data rows of a CSV with `#` comments, header dropped.
fn csv_rows(o: &Output) -> Vec<Vec<f64>> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[test]
fn analyze_shift_fixture() {
    let o = qmc(&["analyze", &fixture("shift.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["period"], 2);
    assert_eq!(v["irreducible"], true);
    assert_eq!(v["settings"]["cap_tensor"], 4096);
}

#[test]
fn analyze_m3_is_primitive() {
    let o = qmc(&["analyze", &fixture("m3_theta_0.2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["period"], 1);
    let o = qmc(&["analyze", "--model", "m3", "--theta", "0.2"]);
    assert_eq!(stdout_json(&o)["period"], 1);
}

#[test]
fn scaled_identity_is_not_an_isometry() {
    let o = qmc(&["analyze", &fixture("scaled_identity.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_error(&o)["kind"], "NotIsometry");
}

#[test]
fn reducible_channel_exits_with_two() {
    let o = qmc(&["analyze", &fixture("diagonal_reducible.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error(&o)["kind"], "NotIrreducible");
    assert_eq!(stdout_json(&o)["irreducible"], false);
}

#[test]
fn malformed_input_and_usage_errors_exit_with_one() {
    let dir = std::env::temp_dir().join(format!("qmc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"d\": 2, \"k\": ").unwrap();
    let o = qmc(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_error(&o)["kind"], "Json");
    let o = qmc(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    stderr_error(&o);
    let o = qmc(&["analyze", "--model", "m1", "--theta", "0.1"]);
    assert_eq!(stderr_error(&o)["kind"], "OutOfInterval");
}

#[test]
fn equivalence_of_gauge_copy() {
    let o = qmc(&["equiv", &fixture("random.json"), &fixture("random_gauge_copy.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["equivalent"], true);
    assert!(v["witness"]["residual"].as_f64().unwrap() < 1e-8);
    let o = qmc(&["equiv", &fixture("random.json"), &fixture("random_other.json")]);
    assert_eq!(stdout_json(&o)["equivalent"], false);
}

#[test]
fn qfi_table_reaches_the_rate() {
    let o = qmc(&["qfi", "--model", "m1", "--theta", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("# tol_peripheral="));
    let rows = csv_rows(&o);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 400.0);
    assert!((last[2] - last[3]).abs() <= 0.02 * last[3]);
}

#[test]
fn converge_error_column_trends_down() {
    let o = qmc(&["converge", "--model", "m1", "--theta", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let errs: Vec<f64> = csv_rows(&o).iter().map(|r| r[5]).collect();
    assert_eq!(errs.len(), 7);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn simulate_is_deterministic_across_runs_and_threads() {
    let args = ["simulate", "--model", "m3", "--theta", "0.1", "--n", "400", "--trials", "40", "--seed", "7", "--block", "2"];
    let a = qmc(&args);
    let b = qmc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let single = Command::new(env!("CARGO_BIN_EXE_qmc")).args(args).env("QMC_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, single.stdout);
    assert_eq!(csv_rows(&a).len(), 40);
}

#[test]
fn emitted_json_round_trips() {
    let o = qmc(&["analyze", &fixture("m3_theta_0.2.json")]);
    let v = stdout_json(&o);
    let rho: MatrixJson = serde_json::from_value(v["rho_ss"].clone()).unwrap();
    let iso = qmc::core::json::isometry_from_str(&std::fs::read_to_string(fixture("m3_theta_0.2.json")).unwrap()).unwrap();
    let p = analyze(&iso, ErgodicTol::default()).unwrap();
    let back = rho.to_matrix().unwrap();
    assert!((back - p.rho().matrix()).iter().all(|z| z.norm() <= 1e-15));
    assert_eq!(serde_json::to_value(&rho).unwrap(), v["rho_ss"]);
}

#[test]
fn tolerance_overrides_are_echoed_and_validated() {
    let o = qmc(&["analyze", "--tol-peripheral", "1e-6", "--cap-tensor", "256", &fixture("shift.json")]);
    let v = stdout_json(&o);
    assert_eq!(v["settings"]["tol_peripheral"], 1e-6);
    assert_eq!(v["settings"]["cap_tensor"], 256);
    let o = qmc(&["analyze", "--tol-faithful", "0", &fixture("shift.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn example_bundle_for_each_family() {
    for (m, t, kind) in [
        ("m1", "0.3", "gaussian shift (direction along the periodic submanifold)"),
        ("m2", "0", "gaussian shift times gaussian mixture"),
        ("m3", "0", "gaussian mixture"),
    ] {
        let o = qmc(&["example", "--model", m, "--theta", t, "--report", "full"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v = stdout_json(&o);
        assert_eq!(v["limit_model"], kind, "{m}");
        assert!(v["profile"]["period"].is_number());
        assert!(v["tangent"]["a_id"].is_object());
    }
}

#[test]
fn limit_model_and_variance_tables() {
    let o = qmc(&["limit-model", "--model", "shift"]);
    let v = stdout_json(&o);
    for row in v["grid"].as_array().unwrap() {
        assert!(row["trace_distance_x_ux"].as_f64().unwrap() <= 1e-9);
    }
    let o = qmc(&["variance", "--model", "shift", "--n-max", "8"]);
    assert!(csv_rows(&o).iter().all(|r| r[2].abs() < 1e-12));
}
