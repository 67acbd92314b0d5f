use std::path::Path;
use std::process::{Command, Output};

fn heatjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatjet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn flat_metric_both_forms_match() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("flat.json");
    let out = heatjet(&[
        "fixture",
        "flat",
        "--d",
        "3",
        "--order",
        "8",
        "-o",
        path_str(&file),
    ]);
    assert!(out.status.success());
    let out = heatjet(&[
        "compute",
        "--n",
        "1",
        "--metric",
        path_str(&file),
        "--form",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(4*pi)^(-3/2)"), "{text}");
    assert!(text.lines().any(|l| l == "0, 0, MATCH"), "{text}");
}

#[test]
fn sphere_first_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s2.json");
    let out = heatjet(&[
        "fixture",
        "constant-curvature",
        "--d",
        "2",
        "--curvature",
        "1",
        "--order",
        "8",
        "-o",
        path_str(&file),
    ]);
    assert!(out.status.success());
    let out = heatjet(&[
        "compute",
        "--n",
        "1",
        "--metric",
        path_str(&file),
        "--form",
        "binomial",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l == "1/3"), "{}", stdout(&out));
}

#[test]
fn malformed_coefficient_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(
        &file,
        "{\n  \"dimension\": 2,\n  \"order\": 8,\n  \"normal_form\": false,\n  \"entries\": [\n    {\"i\":1,\"j\":1,\"monomial\":[0,2],\"coeff\":\"1/0\"}\n  ]\n}\n",
    )
    .unwrap();
    let out = heatjet(&["compute", "--n", "1", "--metric", path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn insufficient_order_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("flat.json");
    heatjet(&[
        "fixture",
        "flat",
        "--d",
        "2",
        "--order",
        "4",
        "-o",
        path_str(&file),
    ]);
    let out = heatjet(&["compute", "--n", "1", "--metric", path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kdv_polynomials() {
    let out = heatjet(&["kdv", "--n", "1"]);
    assert_eq!(stdout(&out).trim(), "G_1 = U0");
    let out = heatjet(&["kdv", "--n", "3"]);
    assert_eq!(
        stdout(&out).trim(),
        "G_3 = U4 + 10*U0*U2 + 5*U1^2 + 10*U0^3"
    );
    let out = heatjet(&["kdv", "--n", "5", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().last(), Some("MATCH"));
}

#[test]
fn identity_checks_report_zero_failures() {
    for args in [
        &["verify", "--identity", "comb1"][..],
        &[
            "verify",
            "--identity",
            "vandermonde",
            "--zw-max",
            "9/2",
            "--u-max",
            "8",
        ],
        &["verify", "--identity", "multinomial"],
        &["verify", "--identity", "comb1", "--u-max", "0"],
    ] {
        let out = heatjet(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(stdout(&out).contains(", 0 failures"), "{}", stdout(&out));
    }
    let out = heatjet(&["verify", "--identity", "vandermonde", "--zw-max", "1/3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_curvature_fixture_is_flat() {
    let a = heatjet(&[
        "fixture",
        "constant-curvature",
        "--d",
        "3",
        "--curvature",
        "0",
        "--order",
        "6",
    ]);
    let b = heatjet(&["fixture", "flat", "--d", "3", "--order", "6"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixture_round_trip_matches_in_memory_result() {
    use heatjet::fixtures::random_normal_2jet;
    use heatjet::heat::a_n_binomial_form;

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let out = heatjet(&[
        "fixture",
        "random-2jet",
        "--d",
        "3",
        "--seed",
        "7",
        "--order",
        "16",
        "-o",
        path_str(&file),
    ]);
    assert!(out.status.success());
    let expected = a_n_binomial_form(&random_normal_2jet(3, 7, 16).unwrap(), 2)
        .unwrap()
        .normalized_value
        .to_string();
    let out = heatjet(&["compute", "--n", "2", "--metric", path_str(&file), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["match"], true);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["value"], expected.as_str());
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k.json");
    heatjet(&[
        "fixture",
        "constant-curvature",
        "--d",
        "3",
        "--curvature",
        "-1/2",
        "--order",
        "16",
        "-o",
        path_str(&file),
    ]);
    let args = ["compute", "--n", "2", "--metric", path_str(&file)];
    let first = heatjet(&args);
    let second = heatjet(&args);
    assert_eq!(first.stdout, second.stdout);
    let single = Command::new(env!("CARGO_BIN_EXE_heatjet"))
        .args(args)
        .env("HEATJET_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, single.stdout);
}

#[test]
fn sphere_oracle_reports_errors() {
    let out = heatjet(&["oracle", "sphere-trace", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("1  1/3  ")), "{text}");
}
