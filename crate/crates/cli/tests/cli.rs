use std::process::{Command, Output};

use serde_json::Value;

fn flagdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagdeg")).args(args).env_remove("FLAGDEG_BUDGET").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn records(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = vec!["--format", "records"];
    full.extend_from_slice(args);
    let out = flagdeg(&full);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let values = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    (code(&out), values)
}

fn find<'a>(values: &'a [Value], kind: &str) -> &'a Value {
    values.iter().find(|v| v["record"] == kind).unwrap_or_else(|| panic!("no {kind} record in {values:?}"))
}

#[test]
fn degree_examples() {
    let (c, v) = records(&["degree", "grassmann", "--n", "6", "--k", "3", "--cross-check"]);
    assert_eq!(c, 0);
    assert_eq!(find(&v, "degree")["degree"], "42");
    assert_eq!(find(&v, "cross-check")["agrees"], true);

    let (_, v) = records(&["degree", "symplectic-flag", "--lambda", "2,1"]);
    assert_eq!(find(&v, "degree")["degree"], "24");

    let (_, v) = records(&["degree", "bh", "--family", "C", "--n", "2", "--lambda", "1,1"]);
    let d = find(&v, "degree");
    assert_eq!((d["dim"].as_u64(), d["degree"].as_str()), (Some(3), Some("2")));

    let (c, v) = records(&["degree", "schubert", "--n", "4", "--k", "2", "--partition", "1", "--cross-check"]);
    assert_eq!(c, 0);
    assert_eq!(find(&v, "degree")["degree"], "2");
    let (_, w) = records(&["degree", "schubert", "--n", "4", "--k", "2", "--indexset", "2,4"]);
    assert_eq!(find(&w, "degree")["degree"], "2");
}

#[test]
fn identity_examples() {
    let (c, v) = records(&["identity", "grassmann", "--n", "5", "--k", "2", "--trials", "100"]);
    assert_eq!(c, 0);
    let r = find(&v, "identity");
    assert_eq!((r["agreements"].as_u64(), r["expected"].as_str()), (Some(100), Some("5")));

    let (_, v) = records(&["identity", "segre", "--r", "1", "--s", "4"]);
    assert_eq!(find(&v, "identity")["expected"], "1");

    let (c, v) =
        records(&["identity", "symplectic-flag", "--k", "2", "--lambda", "2,1", "--trials", "20", "--p", "11"]);
    assert_eq!(c, 0);
    let r = find(&v, "identity");
    assert_eq!((r["agreements"].as_u64(), r["field"].as_str()), (Some(20), Some("F_11")));
}

#[test]
fn sumset_flag_exits_one() {
    let (c, v) = records(&["sumset", "signed", "--p", "7", "--set", "1,2,3", "--k", "2"]);
    assert_eq!(c, 1);
    let s = find(&v, "sumset");
    assert_eq!((s["size"].as_u64(), s["zero_attained"].as_bool()), (Some(6), Some(false)));
    assert!(v.iter().any(|r| r["record"] == "verdict" && r["outcome"] == "flag"));
}

#[test]
fn scans_and_extremal() {
    let (c, v) = records(&["scan", "ddsh", "--primes", "3,5,7"]);
    assert_eq!(c, 0);
    assert_eq!(find(&v, "scan")["fail"], 0);

    let (c, v) = records(&["scan", "signed-extremal", "--p", "17", "--n", "3", "--k", "2"]);
    assert_eq!(c, 0);
    let e = find(&v, "extremal");
    assert_eq!(e["minimum"], 8);
    assert!(e["progression_minimizers"].as_u64().unwrap() > 0);
}

#[test]
fn budget_truncation_exits_three() {
    let (c, v) = records(&["--budget", "50", "scan", "ddsh", "--primes", "11"]);
    assert_eq!(c, 3);
    assert_eq!(find(&v, "scan")["complete"], false);
    assert_eq!(find(&v, "summary")["status"], "incomplete");

    let out = Command::new(env!("CARGO_BIN_EXE_flagdeg"))
        .args(["scan", "ddsh", "--primes", "11"])
        .env("FLAGDEG_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_and_contract_errors_exit_two() {
    assert_eq!(code(&flagdeg(&["degree", "partial-flag", "--lambda", "1,2,0"])), 2);
    assert_eq!(code(&flagdeg(&["degree", "grassmann", "--n", "x", "--k", "1"])), 2);
    assert_eq!(code(&flagdeg(&["frobnicate"])), 2);
    assert_eq!(code(&flagdeg(&["grasshopper", "adversary", "--k", "3", "--P", "1", "--b", "1,0"])), 2);
    assert_eq!(code(&flagdeg(&["grasshopper", "search", "--jumps", "1,1", "--forbid1", "2"])), 2);
    let out = flagdeg(&["sumset", "restricted", "--p", "8", "--set", "1,2", "--k", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn grasshopper_examples() {
    let (c, v) = records(&["grasshopper", "check-b", "--k", "3", "--b", "2,1"]);
    assert_eq!(c, 0);
    let r = find(&v, "check-b");
    assert_eq!((r["matching"].as_bool(), r["agree"].as_bool()), (Some(true), Some(true)));

    let (_, v) = records(&["grasshopper", "search", "--jumps", "1,2", "--forbid1", "1"]);
    assert_eq!(find(&v, "search")["witness"], serde_json::json!([2, 1]));

    let (c, v) = records(&["grasshopper", "adversary", "--k", "3", "--P", "1", "--b", "3,0"]);
    assert_eq!(c, 0);
    assert!(find(&v, "adversary")["search"].is_null());

    let (c, v) = records(&["grasshopper", "bruhat", "--w", "3,1,2", "--b", "1,1", "--trials", "20"]);
    assert_eq!(c, 0);
    assert_eq!(find(&v, "bruhat")["agree"], true);

    let (c, v) = records(&[
        "grasshopper",
        "signed",
        "--k",
        "2",
        "--b",
        "1,3",
        "--jumps",
        "1,2",
        "--forbid1",
        "1,-1",
        "--forbid2",
        "3",
    ]);
    assert_eq!(c, 0);
    assert!(!find(&v, "signed-search")["order"].is_null());

    let (c, v) = records(&["grasshopper", "kb", "--k", "4"]);
    assert_eq!(c, 0);
    assert_eq!(find(&v, "kb-table")["sum_agrees"], true);
}

#[test]
fn records_round_trip_and_carry_a_header() {
    let out = flagdeg(&[
        "--format",
        "records",
        "--seed",
        "9",
        "identity",
        "partial-flag",
        "--lambda",
        "2,1,0",
        "--trials",
        "5",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), line);
    }
    let header: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(header["record"], "header");
    assert_eq!(header["format_version"], 1);
    assert_eq!(header["seed"], 9);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("flagdeg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let args = ["--format", "records", "grasshopper", "check-b", "--k", "4", "--b", "1,2,3", "--trials", "10"];
    let stdout = flagdeg(&args).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let out = flagdeg(&with_file);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(dir).unwrap();
}
