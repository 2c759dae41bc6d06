//! Contract tests for the `crossforms` binary: output shapes, exit codes,
//! determinism.

use std::process::{Command, Output};

use crossforms::qseries::QExpansion;
use crossforms::rational::{parse_rat, rat, rat_int};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossforms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn series_fw_exact_coefficients() {
    let json = stdout(&["series", "fW", "--order", "6"]);
    let series = QExpansion::from_json_str(json.trim()).expect("parses");
    assert_eq!(series.leading(), &rat_int(2));
    let expect = [
        ("2", "1/5"),
        ("4", "16/55"),
        ("6", "364/935"),
        ("8", "13568/21505"),
        ("10", "91614/124729"),
    ];
    for (e, c) in expect {
        let exp = parse_rat(e).unwrap();
        assert_eq!(
            series.coeff_at(&exp).unwrap(),
            parse_rat(c).unwrap(),
            "coefficient at qh^{e}"
        );
    }
}

#[test]
fn series_lambda_exact_coefficients() {
    let json = stdout(&["series", "lambda", "--order", "3"]);
    let series = QExpansion::from_json_str(json.trim()).unwrap();
    assert_eq!(series.coeffs(), &[rat_int(16), rat_int(-128), rat_int(704)]);
    let json = stdout(&["series", "lambda_prime", "--order", "3"]);
    let series = QExpansion::from_json_str(json.trim()).unwrap();
    assert_eq!(series.coeffs(), &[rat_int(8), rat_int(-128), rat_int(1056)]);
}

#[test]
fn series_h_gamma_zero() {
    let json = stdout(&["series", "h", "--gamma", "0", "--order", "1"]);
    let series = QExpansion::from_json_str(json.trim()).unwrap();
    assert_eq!(series.leading(), &rat_int(0));
    assert_eq!(series.coeff(0), &rat_int(1));
}

#[test]
fn series_csv_round_trips() {
    let csv = stdout(&["series", "eta", "--order", "8", "--format", "csv"]);
    assert!(csv.starts_with("exponent,numerator,denominator\r\n"));
    let parsed = QExpansion::from_csv(&csv).unwrap();
    assert_eq!(parsed.leading(), &rat(1, 12));
    assert_eq!(parsed.order(), 8);
    // Bit-exact round trip.
    assert_eq!(parsed.to_csv(), csv);
}

#[test]
fn series_usage_errors() {
    assert_eq!(exit_code(&["series", "nonsense"]), 2);
    assert_eq!(exit_code(&["series", "h", "--order", "4"]), 2); // missing gamma
    assert_eq!(exit_code(&["series", "eta", "--gamma", "1/3"]), 2); // stray gamma
    assert_eq!(exit_code(&["series", "eta", "--order", "0"]), 2);
}

#[test]
fn crossing_self_dual_point() {
    let json = stdout(&["crossing", "pih", "--r", "1"]);
    let rows: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    let value = rows[0]["value"].as_f64().unwrap();
    assert!((value - 0.5).abs() < 1e-10, "{value}");
}

#[test]
fn crossing_all_methods_agree() {
    let json = stdout(&["crossing", "pih", "--r", "2", "--method", "all"]);
    let rows: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    let values: Vec<f64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    for v in &values[1..] {
        assert!((v - values[0]).abs() < 1e-8);
    }
}

#[test]
fn crossing_partition_symmetry() {
    let a = stdout(&["crossing", "Z", "--l", "1", "--lp", "2", "--c", "0.5"]);
    let b = stdout(&["crossing", "Z", "--l", "2", "--lp", "1", "--c", "0.5"]);
    let av: serde_json::Value = serde_json::from_str(a.trim()).unwrap();
    let bv: serde_json::Value = serde_json::from_str(b.trim()).unwrap();
    let (za, zb) = (av["value"].as_f64().unwrap(), bv["value"].as_f64().unwrap());
    assert!(((za - zb) / za).abs() < 1e-10);
}

#[test]
fn crossing_grid_and_csv() {
    let csv = stdout(&[
        "crossing", "pih", "--r-grid", "1:2:3", "--method", "eta", "--format", "csv",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,value,method,est_error");
    assert_eq!(lines.len(), 4);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "1");
    let value: f64 = first[1].parse().unwrap();
    assert!((value - 0.5).abs() < 1e-10);
}

#[test]
fn crossing_usage_errors() {
    assert_eq!(exit_code(&["crossing", "bogus", "--r", "1"]), 2);
    assert_eq!(exit_code(&["crossing", "pih"]), 2); // no r
    assert_eq!(exit_code(&["crossing", "pih", "--r", "-1"]), 2);
    assert_eq!(exit_code(&["crossing", "pih", "--r", "1", "--method", "x"]), 2);
    assert_eq!(exit_code(&["crossing", "Z", "--l", "1"]), 2);
    assert_eq!(
        exit_code(&["crossing", "pi2", "--r", "1", "--alpha", "1/2", "--beta", "1/4"]),
        2
    );
}

#[test]
fn sle_values_and_exit_codes() {
    let json = stdout(&["sle", "--lam", "0.5", "--kappa", "6"]);
    let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert_eq!(exit_code(&["sle", "--lam", "0.5", "--kappa", "9"]), 2);
    // Slow hypergeometric convergence near the closing point is a numeric
    // failure, not a usage error.
    assert_eq!(
        exit_code(&["sle", "--lam", "0.9999999", "--kappa", "4.5"]),
        3
    );
    // The integral route handles the closing point itself.
    let json = stdout(&["sle", "--lam", "1", "--kappa", "4.5", "--method", "integral"]);
    let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn mc_deterministic_output_bytes() {
    let args = [
        "mc", "--width", "24", "--height", "24", "--trials", "400", "--seed", "9",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    // Thread count must not change the payload.
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "4"]);
    let c = stdout(&with_threads);
    assert_eq!(a, c);
}

#[test]
fn mc_payload_shape() {
    let json = stdout(&[
        "mc", "--width", "32", "--height", "32", "--trials", "500", "--seed", "1",
        "--quantity", "hv",
    ]);
    let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    let est = &v["estimate"];
    assert_eq!(est["quantity"], "horizontal_and_vertical");
    assert_eq!(est["L"], 32);
    assert_eq!(est["Lp"], 32);
    assert_eq!(est["trials"], 500);
    assert!(v["comparison"]["formula"].as_f64().unwrap() > 0.0);
    assert!(v["comparison"]["z_score"].is_number());
    assert_eq!(exit_code(&["mc", "--trials", "0"]), 2);
    assert_eq!(exit_code(&["mc", "--trials", "5", "--quantity", "x"]), 2);
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "partition"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS]"), "{text}");
    assert!(text.contains("suite partition: PASS"));
    assert_eq!(exit_code(&["verify", "nonsense"]), 2);
    // An impossible tolerance forces a verification failure (exit 1).
    assert_eq!(exit_code(&["verify", "duality", "--tol", "1e-30"]), 1);
}

#[test]
fn verify_all_passes_on_a_correct_build() {
    let out = run(&["verify", "all"]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(out.status.success(), "{text}");
    assert!(text.contains("suite all: PASS"), "{text}");
}

#[test]
fn verify_json_report() {
    let text = stdout(&["verify", "partition", "--json"]);
    let json_line = text.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert_eq!(v["suite"], "partition");
    assert_eq!(v["overall"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 4);
}
