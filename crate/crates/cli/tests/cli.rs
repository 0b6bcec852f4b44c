use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spantree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spantree"))
        .args(args)
        .env_remove("SPANTREE_ATLAS_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = spantree(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    spantree(args).status.code().unwrap()
}

fn build_atlases(dir: &Path, up_to: usize) {
    for n in 1..=up_to {
        let n = n.to_string();
        stdout(&["atlas", "--n", &n, "--jobs", "2", "--atlas-dir", dir.to_str().unwrap()]);
    }
}

#[test]
fn tau_sources() {
    assert_eq!(stdout(&["tau", "--flower", "3,5"]), "15\n");
    assert_eq!(stdout(&["tau", "--complete", "4"]), "16\n");
    assert_eq!(stdout(&["tau", "--cycle", "7"]), "7\n");
    assert_eq!(json(&["tau", "--complete", "12"])["tau"], Value::from("61917364224"));
}

#[test]
fn tau_errors() {
    assert_eq!(code(&["tau", "--cycle", "2"]), 2);
    assert_eq!(code(&["tau", "--flower", "2,3"]), 2);
    assert_eq!(code(&["tau"]), 2);
    assert_eq!(code(&["tau", "--cycle", "3", "--complete", "3"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "n 3\n0 1\n1 q\n").unwrap();
    let out = spantree(&["tau", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn tau_of_disconnected_input_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.edges");
    fs::write(&file, "# two components\nn 4\n0 1\n2 3 2\n").unwrap();
    assert_eq!(stdout(&["tau", "--input", file.to_str().unwrap()]), "0\n");
}

#[test]
fn partitions_counts_and_listing() {
    assert_eq!(stdout(&["partitions", "--n", "10", "--class", "oddprime"]), "2\n");
    assert_eq!(stdout(&["partitions", "--n", "10", "--class", "oddprime", "--cumulative"]), "8\n");
    assert_eq!(stdout(&["partitions", "--n", "0", "--class", "all"]), "1\n");
    assert_eq!(stdout(&["partitions", "--n", "10", "--class", "oddprime", "--list"]), "3+7\n5+5\n");
    assert_eq!(
        stdout(&["partitions", "--n", "10", "--class", "oddprime", "--list", "--cumulative"]),
        "3\n5\n3+3\n7\n3+5\n3+3+3\n3+7\n5+5\n"
    );
    assert_eq!(code(&["partitions", "--n", "10", "--class", "prime", "--cumulative"]), 2);
    assert_eq!(json(&["partitions", "--n", "100", "--class", "all"])["count"], Value::from("190569292"));
}

#[test]
fn witness_table() {
    let rows = json(&["witness", "--n", "10"]);
    let taus: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["tau"].as_str().unwrap()).collect();
    assert_eq!(taus, ["3", "5", "9", "7", "15", "27", "21", "25"]);
    assert!(rows.as_array().unwrap().iter().all(|r| r["vertices"] == 10));

    let table = stdout(&["witness", "--n", "3"]);
    let last = table.lines().last().unwrap();
    let cells: Vec<&str> = last.split('|').map(str::trim).collect();
    assert_eq!(cells, ["3", "3", "3", "3"]);
    assert_eq!(code(&["witness", "--n", "2"]), 2);
}

#[test]
fn emitted_witnesses_round_trip_through_tau() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("w");
    stdout(&["witness", "--n", "12", "--emit", emit.to_str().unwrap()]);
    let rows = json(&["witness", "--n", "12"]);
    let rows = rows.as_array().unwrap();
    for (index, row) in rows.iter().enumerate() {
        let edges = emit.join(format!("witness_12_{index}.edges"));
        let sidecar: Value =
            serde_json::from_str(&fs::read_to_string(emit.join(format!("witness_12_{index}.json"))).unwrap()).unwrap();
        let recomputed = stdout(&["tau", "--input", edges.to_str().unwrap()]);
        assert_eq!(recomputed.trim(), row["tau"].as_str().unwrap());
        assert_eq!(sidecar["tau"], row["tau"]);
        assert_eq!(sidecar["n"], 12);
    }
    assert!(!emit.join(format!("witness_12_{}.edges", rows.len())).exists());
}

#[test]
fn atlas_alpha_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(stdout(&["atlas", "--n", "4", "--atlas-dir", d]), "5\n");
    let record: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("atlas_4.json")).unwrap()).unwrap();
    assert_eq!(record["values"], serde_json::json!(["1", "3", "4", "8", "16"]));
    assert_eq!(record["size"], 5);

    build_atlases(dir.path(), 5);
    assert_eq!(stdout(&["alpha", "--m", "9", "--atlas-dir", d]), "5\n");
    assert_eq!(stdout(&["alpha", "--m", "2", "--atlas-dir", d]), "> 5\n");
    let via_env = Command::new(env!("CARGO_BIN_EXE_spantree"))
        .args(["alpha", "--m", "16"])
        .env("SPANTREE_ATLAS_DIR", d)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), "4\n");

    let rows = json(&["bounds", "--max-n", "7", "--atlas-dir", d]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[6]["p_set_size"], Value::from("4"));
    assert_eq!(rows[6]["atlas_size"], Value::Null);
    assert_eq!(rows[4]["atlas_size"], Value::from("16"));
    assert_eq!(rows[6]["sedlacek"], Value::Null);
    assert!(rows[6]["lemma1_log"].as_f64().unwrap() > 0.0);
}

#[test]
fn atlas_file_and_force() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested").join("a3.json");
    stdout(&["atlas", "--n", "3", "--out", out.to_str().unwrap()]);
    let record: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(record["values"], serde_json::json!(["1", "3"]));
    assert_eq!(code(&["atlas", "--n", "9", "--atlas-dir", dir.path().to_str().unwrap()]), 2);
    assert_eq!(code(&["atlas", "--n", "0"]), 2);
}

#[test]
fn missing_atlas_data_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["alpha", "--m", "9", "--atlas-dir", dir.path().to_str().unwrap()]), 3);
}

#[test]
fn asymptotics_table() {
    let rows = json(&["asymptotics", "--grid", "100"]);
    assert_eq!(rows[0]["p_exact"], Value::from("190569292"));
    let ratio = rows[0]["hr_ratio"].as_f64().unwrap();
    assert!((ratio - 0.9563).abs() < 1e-4, "{ratio}");

    let rows = json(&["asymptotics", "--grid", "1000,1000000", "--check-lhospital"]);
    let r = |i: usize| rows[i]["lhospital_ratio"].as_f64().unwrap();
    assert!((r(1) - 1.0).abs() < (r(0) - 1.0).abs());
    assert_eq!(rows[1]["p_exact"], Value::Null);
    assert_eq!(rows[1]["hr_value"], Value::Null);

    let rows = json(&["asymptotics", "--grid", "2"]);
    assert_eq!(rows[0]["p_exact"], Value::from("2"));
    assert_eq!(code(&["asymptotics", "--grid", "100,10"]), 2);
}

#[test]
fn csv_has_header() {
    let csv = stdout(&["--format", "csv", "witness", "--n", "5"]);
    assert_eq!(csv, "partition,tau,vertices,edges\n3,3,5,5\n5,5,5,5\n");
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["--format", "json", "witness", "--n", "20"][..],
        &["asymptotics", "--grid", "10,100,1000", "--check-lhospital"][..],
        &["--format", "csv", "bounds", "--max-n", "30"][..],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}
