use std::process::{Command, Output};

use serde_json::Value;

fn fracle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn coeff(v: &Value, m: usize) -> f64 {
    v["coefficients"][m].as_f64().unwrap()
}

#[test]
fn solve_polytrope_one() {
    let v = json(&fracle(&[
        "solve",
        "--example",
        "2",
        "--n",
        "1",
        "--alpha",
        "1",
        "--terms",
        "20",
    ]));
    assert_eq!(v["M"], 20);
    assert_eq!(coeff(&v, 2), -1.0 / 6.0);
    assert!(v["residual_max"].as_f64().unwrap() <= 1e-14);
}

#[test]
fn solve_fractional_text_equation() {
    let v = json(&fracle(&[
        "solve",
        "--eq",
        "D2y + (2/x)*Dy + y = 0",
        "--alpha",
        "0.5",
        "--terms",
        "10",
        "--y0",
        "1",
    ]));
    // -Γ(1.5) / (Γ(2) [Γ(1.5) + 2])
    let g = 0.886_226_925_452_758;
    assert!((coeff(&v, 2) + g / (g + 2.0)).abs() <= 1e-13);
    assert_eq!(v["spec"]["alpha"], 0.5);
}

#[test]
fn solution_file_round_trips_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let sol = sol.to_str().unwrap();
    let out = fracle(&["solve", "--example", "3", "--out", sol]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());

    let out = fracle(&["eval", "--solution", sol, "--grid", "0:1:0.5"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "x,y\n0,0\n0.5,0.375\n1,2\n"
    );
}

#[test]
fn eval_at_origin_gives_initial_value() {
    let out = fracle(&["eval", "--example", "4", "--n", "2", "--grid", "0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,y\n0,1\n");
}

#[test]
fn eval_crosses_zero_near_sqrt6() {
    let out = fracle(&["eval", "--example", "2", "--n", "0", "--grid", "0:2.4:0.1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 25);
    for (x, y) in rows {
        assert!((y - (1.0 - x * x / 6.0)).abs() <= 1e-14);
    }
    let out = fracle(&["eval", "--example", "2", "--n", "0", "--grid", "2.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let y: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(y < 0.0);
}

#[test]
fn compare_isothermal_and_gaussian() {
    for ex in ["7", "1"] {
        let v = json(&fracle(&[
            "compare",
            "--example",
            ex,
            "--alpha",
            "1",
            "--xmax",
            "1",
        ]));
        let max = v["max_abs_diff"].as_f64().unwrap();
        assert!(max <= 1e-8, "example {ex}: {max}");
        assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    }
}

#[test]
fn compare_reports_cubic_erratum() {
    let v = json(&fracle(&["compare", "--example", "6", "--alpha", "1"]));
    assert_eq!(coeff(&v, 8), 0.0);
    let errata = v["errata"].as_array().unwrap();
    assert!(errata.iter().any(|e| e.as_str().unwrap().contains("1/72")));
    assert!(v["max_abs_diff"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn compare_at_fractional_order_reports_residual() {
    let v = json(&fracle(&["compare", "--example", "7", "--alpha", "0.6"]));
    assert!(v.get("max_abs_diff").is_none());
    assert!(v["residual_max"].as_f64().unwrap() <= 1e-12);
    assert!(v["rows"][0].get("reference").is_none());
}

#[test]
fn residual_command() {
    let v = json(&fracle(&["residual", "--example", "5", "--alpha", "0.75"]));
    assert!(v["relative"].as_f64().unwrap() <= 1e-10);
    let out = fracle(&["residual", "--example", "5", "--format", "csv"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("order,residual\n"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "compare",
        "--example",
        "4",
        "--n",
        "3",
        "--sign",
        "plus",
        "--alpha",
        "1",
    ];
    assert_eq!(fracle(&args).stdout, fracle(&args).stdout);
    let args = ["solve", "--example", "5", "--alpha", "0.3", "--terms", "40"];
    assert_eq!(fracle(&args).stdout, fracle(&args).stdout);
}

#[test]
fn user_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["solve", "--eq", "D2y +"],
        &["solve", "--eq", "D2y + (2/x)*Dy + y = 0", "--alpha", "1.5"],
        &["solve", "--example", "2"],
        &["solve", "--example", "9"],
        &["solve", "--example", "1", "--terms", "1"],
        &["solve"],
        &["eval", "--example", "1", "--grid=-1:1:0.1"],
        &["eval", "--example", "1", "--grid", "0:1:0"],
        &["eval", "--solution", "/nonexistent/sol.json"],
        &["compare", "--eq", "D2y + (2/x)*Dy + y = 0"],
        &["compare", "--example", "2", "--n", "3"],
        &["compare", "--example", "1", "--xmax", "5"],
    ];
    for args in cases {
        let out = fracle(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = fracle(&["solve", "--eq", "D2y +"]);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("position 5"));
}

#[test]
fn overflow_exits_three() {
    let out = fracle(&[
        "solve",
        "--eq",
        "D2y + (2/x)*Dy - 1e200*y^2 = 0",
        "--y0",
        "1e200",
        "--terms",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("order 2"));
}

#[test]
fn spec_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(
        &path,
        r#"{"alpha": 0.8, "k": 2.0, "terms": [{"c": 1.0, "s": 0, "kind": {"exp": -1.0}}],
            "rhs": [], "y0": 0.0, "dy0": 0.0}"#,
    )
    .unwrap();
    let v = json(&fracle(&["solve", "--spec", path.to_str().unwrap()]));
    assert_eq!(v["alpha"], 0.8);
    assert!(coeff(&v, 2) < 0.0);

    std::fs::write(&path, r#"{"alpha": 0.8}"#).unwrap();
    assert_eq!(
        fracle(&["solve", "--spec", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
