//! End-to-end checks against the installed binary: exit codes, output
//! shapes, and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-zeros"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn eval_free_p2_at_zero() {
    let out = run(&["eval", "--family", "constant:1,0", "--x", "0", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let p2 = text.lines().find(|l| l.starts_with("2")).expect("row for p_2");
    assert!(p2.contains("-1"), "{text}");
}

#[test]
fn eval_period31_p8_at_zero_is_81() {
    let out = run(&[
        "eval", "--family", "periodic2:3,1,0", "--x", "0", "--n", "8", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last = text.lines().next_back().unwrap();
    let value = last.split(',').next_back().unwrap();
    assert_eq!(value.parse::<f64>().unwrap(), 81.0, "{text}");
}

#[test]
fn eval_bogus_family_is_usage_error() {
    let out = run(&["eval", "--family", "bogus", "--x", "0", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zeros_free_degree_two() {
    let out = run(&["zeros", "--family", "constant:1,0", "--n", "2", "--format", "csv"]);
    assert!(out.status.success());
    let zeros: Vec<f64> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(zeros.len(), 2);
    assert!((zeros[0] + 1.0).abs() < 1e-10 && (zeros[1] - 1.0).abs() < 1e-10);
}

#[test]
fn zeros_section4_degree_17_hits_minus_half() {
    let out = run(&["zeros", "--family", "section4", "--n", "17", "--format", "csv"]);
    assert!(out.status.success());
    let near = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .any(|z| (z + 0.5).abs() <= 2.0 / 81.0);
    assert!(near);
}

#[test]
fn zeros_degree_zero_is_usage_error() {
    let out = run(&["zeros", "--family", "constant:1,0", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_section4_range_all_verified() {
    let out = run(&[
        "certify",
        "--family",
        "section4",
        "--x0",
        "0",
        "--support",
        "[-5,-1],[1,5]",
        "--n",
        "1..100",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.ends_with("true")), "{text}");
}

#[test]
fn certify_isolated_rank_one_verified() {
    // small truncation keeps this test fast; the bound state is still
    // cleanly isolated
    let out = run(&[
        "certify",
        "--family",
        r#"{"kind":"rank_one","base":{"kind":"constant","a":1.0,"b":0.0},"b1":3.0}"#,
        "--x0",
        "3.3333",
        "--isolated",
        "--n",
        "1..20",
        "--trunc",
        "300",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().skip(1).count(), 20);
    assert!(text.lines().skip(1).all(|r| r.ends_with("verified")), "{text}");
}

#[test]
fn certify_point_in_support_is_precondition_error() {
    let out = run(&[
        "certify",
        "--family",
        "constant:1,0",
        "--x0",
        "0",
        "--support",
        "[-2,2]",
        "--n",
        "1..5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gapdense_rows_all_pass() {
    let out = run(&["gapdense", "--n-max", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with("true")), "{text}");
}

#[test]
fn gapdense_cloud_stays_in_gap() {
    let out = run(&["gapdense", "--cloud", "97", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).map(str::trim).collect();
    assert!(rows.len() <= 97);
    assert!(!rows.is_empty());
    for r in rows {
        let z: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
        assert!(-1.0 < z && z < 1.0);
    }
}

#[test]
fn output_is_deterministic_across_runs() {
    let args = ["gapdense", "--n-max", "4", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["zeros", "--family", "section4", "--n", "40", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn quadrature_weights_printed_with_17_digits() {
    let out = run(&["quadrature", "--family", "constant:1,0", "--n", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let weight = text.lines().nth(1).unwrap().split(',').next_back().unwrap();
    // 16 digits after the decimal point plus the leading one
    assert!(weight.contains('e'), "{weight}");
    let mantissa = weight.split('e').next().unwrap();
    let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    assert_eq!(digits, 17, "{weight}");
}

#[test]
fn mcheck_reports_small_residual() {
    let out = run(&[
        "mcheck", "--family", "constant:1,0", "--z", "0,2", "--depth", "500", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let residual = v[0]["eq32_residual"].as_f64().unwrap();
    assert!(residual < 1e-8, "{v}");
}
