mod common;

use common::{check_csv, check_json, fixture, fracineq};
use serde_json::Value;

const REL: f64 = 1e-12;

fn json_fixture(name: &str, args: &[&str]) {
    let out = fracineq(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    if let Err(e) = check_json(&out.stdout, &fixture(name), REL) {
        panic!("{name}: {e}");
    }
}

#[test]
fn verify_matches_fixtures() {
    let args = [
        "verify",
        "--family",
        "poincare-sobolev",
        "--alpha",
        "0.75,1",
        "--p",
        "2",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "256",
        "--corpus",
        "poly:4,2,7",
    ];
    json_fixture("verify.json", &[&args[..], &["--no-timestamp"]].concat());
    let csv = fracineq(&[&args[..], &["--out", "csv"]].concat());
    check_csv(&csv.stdout, &fixture("verify.csv"), REL).unwrap();
}

#[test]
fn other_commands_match_fixtures() {
    json_fixture(
        "op.json",
        &[
            "op",
            "--kind",
            "caputo",
            "--alpha",
            "0.5",
            "--expr",
            "t^2",
            "--a",
            "0",
            "--b",
            "1",
            "--n",
            "8",
            "--no-timestamp",
        ],
    );
    json_fixture(
        "converge.json",
        &[
            "converge",
            "--kind",
            "caputo",
            "--alpha",
            "0.5",
            "--expr",
            "t^2",
            "--a",
            "0",
            "--b",
            "1",
            "--n",
            "64,128,256,512",
            "--no-timestamp",
        ],
    );
    json_fixture(
        "sharpness.json",
        &[
            "sharpness",
            "--family",
            "poincare-sobolev",
            "--alpha",
            "1",
            "--p",
            "2",
            "--a",
            "0",
            "--b",
            "1",
            "--budget",
            "20",
            "--n",
            "128",
            "--no-timestamp",
        ],
    );
    let diffuse = fracineq(&["diffuse", "--alpha", "0.75", "--n", "32", "--T", "0.01", "--dt", "0.005"]);
    check_csv(&diffuse.stdout, &fixture("diffuse.csv"), REL).unwrap();
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "verify",
        "--family",
        "hardy",
        "--alpha",
        "0.75,1",
        "--p",
        "2",
        "--a",
        "1",
        "--b",
        "2",
        "--n",
        "128",
        "--no-timestamp",
    ];
    let first = fracineq(&args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, fracineq(&args).stdout);
    assert!(first.stdout.ends_with("}\n") && first.stdout.lines().count() == 1);
}

#[test]
fn timestamp_is_rfc3339_unless_suppressed() {
    let out =
        fracineq(&["op", "--kind", "rl-integral", "--alpha", "0.5", "--expr", "1", "--a", "0", "--b", "1", "--n", "4"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let stamp = v["generated_at"].as_str().expect("timestamp string");
    chrono::DateTime::parse_from_rfc3339(stamp).unwrap();
}

#[test]
fn diffuse_json_carries_the_trace() {
    let out = fracineq(&[
        "diffuse",
        "--alpha",
        "1",
        "--n",
        "16",
        "--T",
        "0.1",
        "--dt",
        "0.03",
        "--out",
        "json",
        "--no-timestamp",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let rows = v["results"].as_array().unwrap();
    let times: Vec<f64> = rows.iter().map(|r| r["t"].as_f64().unwrap()).collect();
    // three full steps and a shortened last one
    assert_eq!(times.len(), 5);
    assert!((times[4] - 0.1).abs() < 1e-15);
    assert!(rows.iter().all(|r| r["energy"].as_f64().unwrap() <= r["bound"].as_f64().unwrap()));
}

#[test]
fn errors_go_to_stderr_with_their_exit_code() {
    let out = fracineq(&["verify", "--family", "hardy", "--alpha", "1", "--p", "2", "--a", "0", "--b", "1"]);
    assert_eq!(out.code, 3);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("a>0"), "{}", out.stderr);

    let parse = fracineq(&["op", "--kind", "caputo", "--alpha", "0.5", "--expr", "sin(t", "--a", "0", "--b", "1"]);
    assert_eq!(parse.code, 2);
    assert!(parse.stderr.contains("offset 5"), "{}", parse.stderr);

    let domain =
        fracineq(&["op", "--kind", "hadamard-integral", "--alpha", "0.5", "--expr", "t", "--a", "0", "--b", "1"]);
    assert_eq!(domain.code, 4, "{}", domain.stderr);
}

#[test]
fn ladder_must_nest() {
    let out = fracineq(&[
        "converge", "--kind", "caputo", "--alpha", "0.5", "--expr", "t", "--a", "0", "--b", "1", "--n", "64,96",
    ]);
    assert_eq!(out.code, 2, "{}", out.stderr);
}

#[test]
fn expressions_may_start_with_a_minus() {
    let out = fracineq(&[
        "op",
        "--kind",
        "rl-integral",
        "--alpha",
        "1",
        "--expr",
        "-t^2",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--out",
        "csv",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let last = out.stdout.lines().last().unwrap();
    let v: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    // trapezoid on two cells of -t^2 over [0, 1]
    assert!((v + 0.375).abs() < 1e-12, "{last}");
}
