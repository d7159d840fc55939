use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn haar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haar"))
        .args(args)
        .env_remove("HAAR_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_d16_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d16.json");
    let out = haar(&["construct", "D16", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["is_hgr"], true);
    assert_eq!(cert["aut_order"], 16);

    let out = haar(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);

    let mut forged = cert.clone();
    forged["aut0_order"] = 32.into();
    fs::write(&path, forged.to_string()).unwrap();
    let out = haar(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn repeat_runs_are_byte_identical() {
    for args in [
        &["construct", "Sym4", "--seed", "3"][..],
        &["construct", "C2^5"],
        &["--workers", "1", "tables", "--max-order", "8"],
    ] {
        let a = haar(args);
        let b = haar(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let one = haar(&[
        "--workers",
        "1",
        "tables",
        "--max-order",
        "8",
        "--format",
        "json",
    ]);
    let four = haar(&[
        "--workers",
        "4",
        "tables",
        "--max-order",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn classify_orders_matches_tables() {
    let out = haar(&["classify", "--orders", "3..8"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.ends_with(",yes")));
    assert!(rows
        .iter()
        .any(|r| r.starts_with("8,C8,exceptional,exceptional,admits,admits")));
}

#[test]
fn yes_no_exit_codes() {
    let out = haar(&["cayley-check", "D6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"], "all Haar graphs Cayley");

    let out = haar(&["cayley-check", "D12"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["witness"].is_array());

    assert_eq!(haar(&["classify", "D8"]).status.code(), Some(1));
    assert_eq!(haar(&["classify", "C8"]).status.code(), Some(1));
}

#[test]
fn budget_exhaustion_is_unknown() {
    let out = haar(&["--budget", "1", "haar", "aut", "C12", "--set", "0,1,3,7"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_haar"))
        .args(["classify", "C8"])
        .env("HAAR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(haar(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(haar(&["construct"]).status.code(), Some(64));
    assert_eq!(haar(&["cayley-check", "Q8xC2"]).status.code(), Some(64));
    assert_eq!(
        haar(&["haar", "build", "C4", "--set", "9"]).status.code(),
        Some(64)
    );
    assert_eq!(haar(&["--help"]).status.code(), Some(0));
}

#[test]
fn group_file_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    fs::write(&path, "{\n  \"name\": \"X\",\n  \"kind\": \n").unwrap();
    let out = haar(&["group", "show", "--group-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    fs::write(
        &path,
        r#"{"name": "C3", "kind": "table", "order": 3, "mul": [[0,1,2],[1,2,0],[2,0,1]]}"#,
    )
    .unwrap();
    let out = haar(&["group", "show", "--group-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["order"], 3);
}

#[test]
fn haar_graph_commands() {
    let out = haar(&["haar", "aut", "C4", "--set", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["aut_order"], 16);
    assert_eq!(v["aut0_order"], 8);

    let out = haar(&["haar", "build", "C4", "--set", "1,s", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("graph Haar"));
}

#[test]
fn poset_and_ideals_from_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c22.json");
    let path = path.to_str().unwrap();
    assert_eq!(
        haar(&["construct", "C22", "-o", path]).status.code(),
        Some(0)
    );

    let v = json(&haar(&["poset", path]));
    assert_eq!(v["report"]["aut_order"], 22);
    assert_eq!(v["report"]["orbit_count"], 2);
    assert_eq!(v["report"]["semiregular"], true);
    assert_eq!(v["poset"]["elements"], 44);

    let dot = haar(&["poset", path, "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout)
        .unwrap()
        .starts_with("digraph Hasse"));

    let out = haar(&["ideals", path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["complement_lattice"]["skipped"].is_string());
}
