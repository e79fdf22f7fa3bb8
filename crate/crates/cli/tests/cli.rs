use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_overmes"))
        .args(args)
        .output()
        .expect("run overmes")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

#[test]
fn count_rows() {
    let out = run(&["count", "--n-max", "4", "--format", "csv"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert_eq!(s.lines().next(), Some("n,gf,enumerated,status"));
    assert_eq!(s.lines().last(), Some("4,14,14,ok"));

    let out = run(&["count", "--n-max", "0", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().nth(1), Some("0,1,1,ok"));

    let out = run(&["count", "--n-max", "10", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().last(), Some("10,232,232,ok"));
}

#[test]
fn count_rejects_negative() {
    let out = run(&["count", "--n-max", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn stats_small_cases() {
    let out = run(&["stats", "--n", "1", "--r", "1", "--A", "1", "--a", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "overpartition,mes\n(1),2\n(1~),2\n");

    let out = run(&[
        "stats", "--n", "1", "--r", "1", "--A", "1", "--a", "1", "--format", "csv", "--unicode",
    ]);
    assert_eq!(stdout(&out), "overpartition,mes\n(1),2\n(1\u{304}),2\n");

    let out = run(&[
        "stats", "--n", "0", "--r", "2", "--A", "3", "--a", "2", "--format", "csv", "--unicode",
    ]);
    assert_eq!(stdout(&out), "overpartition,mes,overmes,tildemes\n∅,2,2,2\n");
}

#[test]
fn stats_bad_params() {
    for args in [
        ["stats", "--n", "3", "--r", "2", "--A", "2", "--a", "3"],
        ["stats", "--n", "3", "--r", "0", "--A", "2", "--a", "1"],
        ["stats", "--n", "-3", "--r", "2", "--A", "2", "--a", "1"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn stats_json_rows() {
    let out = run(&["stats", "--n", "4", "--r", "2", "--A", "2", "--a", "1", "--format", "json"]);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[2]["overpartition"], "(3,1)");
    assert_eq!(rows[2]["tildemes"], 5);
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--theorem", "gen-mes", "--r", "1", "--A", "1", "--a", "1", "--N", "25"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["theorem"], "gen-mes");
    assert_eq!(v["params"], serde_json::json!({"r": 1, "A": 1, "a": 1}));
    assert_eq!(v["order"], 25);
    assert_eq!(v["status"], "pass");
    assert!(v["first_mismatch"].is_null());
    assert!(v["entries_checked"].as_u64().unwrap() > 0);
    assert!(v["elapsed_ms"].is_number());
}

#[test]
fn verify_reports_matched_value() {
    let out = run(&[
        "verify", "--theorem", "gen-sigma-tildemes", "--r", "2", "--A", "2", "--a", "1", "--N", "4",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let values = v["values"].as_array().unwrap();
    assert!(values.iter().any(|e| e["n"] == 4 && e["value"] == 42 && e["k"].is_null()));
}

#[test]
fn verify_usage_errors() {
    let out = run(&["verify", "--theorem", "gen-omes", "--r", "2", "--A", "1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gen-omes requires r=1"));

    let out = run(&["verify", "--theorem", "gen-nope", "--r", "2", "--A", "1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--theorem", "gen-mes", "--r", "2", "--A", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn injected_fault_fails() {
    let out = run(&[
        "verify", "--theorem", "gen-sigma-mes", "--r", "2", "--A", "2", "--a", "1", "--N", "6",
        "--inject-fault", "gen-sigma-mes:_:3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["status"], "fail");
    assert!(v["first_mismatch"]["k"].is_null());
    assert_eq!(v["first_mismatch"]["n"], 3);
}

#[test]
fn verify_all_small() {
    let out = run(&["verify-all", "--N", "0", "--r-max", "2", "--A-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["failed"], 0);

    let out = run(&["verify-all", "--N", "10", "--r-max", "2", "--A-max", "2"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "verify-all", "--N", "10", "--r-max", "2", "--A-max", "2", "--inject-fault", "m-gen:1:5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failing: Vec<_> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|r| r["theorem"] == "m-gen"));

    let out = run(&["verify-all", "--r-max", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &["verify-all", "--N", "12", "--r-max", "2", "--A-max", "3", "--no-timing"],
        &["verify", "--theorem", "gen-tildemes", "--r", "3", "--A", "2", "--a", "2", "--no-timing"],
        &["table", "--theorem", "tilde-m-gen", "--r", "2", "--A", "3", "--a", "1", "--N", "15", "--format", "csv"],
        &["stats", "--n", "7", "--r", "3", "--A", "2", "--a", "2"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn table_lists_both_sides() {
    let out = run(&[
        "table", "--theorem", "gen-mes", "--r", "2", "--A", "2", "--a", "1", "--N", "4", "--format", "csv",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert_eq!(s.lines().next(), Some("k,z,n,enumerated,formula,status"));
    assert!(s.lines().any(|l| l == "0,1,4,8,8,ok"));
    assert!(s.lines().any(|l| l == "1,3,4,6,6,ok"));
}
