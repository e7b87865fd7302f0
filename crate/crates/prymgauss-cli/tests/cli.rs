//! End-to-end tests against the built binary: subcommand output, golden tables,
//! caching, round-trips and exit codes.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_prym-gauss");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
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

fn stdout_json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("json output")
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const Z14_SPEC: &str = r#"{
  "group": {"free_rank": 0, "torsion": [14]},
  "degree": [5],
  "blocks": [[[9],[4],[11],[6],[7],[10],[3],[0],[8],[12]]]
}"#;

#[test]
fn formula_values() {
    assert_eq!(stdout(&["formulas", "mu", "--d", "1,1,1,1,1"]).trim(), "30");
    assert_eq!(stdout(&["formulas", "mu", "--d", "2,3"]).trim(), "52");
    assert_eq!(
        stdout(&["formulas", "egt", "--g", "5", "--t", "1", "--case", "generic", "--xi", "18"])
            .trim(),
        "76"
    );
    assert_eq!(stdout(&["formulas", "jacobian", "--g", "5"]).trim(), "70");
    assert_eq!(
        stdout(&["formulas", "egt", "--g", "5", "--t", "2", "--case", "t2-cprime-hyperelliptic", "--xi", "4"])
            .trim(),
        "52"
    );
    assert_eq!(stdout(&["formulas", "bound", "--d", "5"]).trim(), "50");
    assert_eq!(stdout(&["formulas", "mu-tilde", "--d", "1"]).trim(), "0");
    let v = stdout_json(&["formulas", "mu", "--d", "1,4", "--format", "json"]);
    assert_eq!(v["mu"], Value::from(70u64));
}

#[test]
fn alt_flag_limited_to_g4t2() {
    let out = run(&[
        "formulas",
        "egt",
        "--g",
        "4",
        "--t",
        "2",
        "--case",
        "g4t2-both-hyperelliptic",
        "--alt",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "14");
    let out = run(&[
        "formulas", "egt", "--g", "5", "--t", "1", "--case", "generic", "--alt",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_z14() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(dir.path(), "z14.json", Z14_SPEC);
    for method in ["naive", "mitm"] {
        let v = stdout_json(&["count", "--spec", &spec, "--method", method]);
        assert_eq!(v["xi"], Value::from(20u64));
        assert_eq!(v["total_sum_zero"], Value::Bool(true));
        assert_eq!(v["on_diagonal"], Value::Bool(false));
    }
    // thread count must not change the answer
    let v = stdout_json(&[
        "count",
        "--spec",
        &spec,
        "--method",
        "naive",
        "--threads",
        "4",
    ]);
    assert_eq!(v["xi"], Value::from(20u64));
}

#[test]
fn nonzero_sum_warns_but_counts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "c.json",
        r#"{"group": {"free_rank": 0, "torsion": [3]}, "degree": [1], "blocks": [[[1],[2]]]}"#,
    );
    let v = stdout_json(&["count", "--spec", &spec]);
    assert_eq!(v["xi"], Value::from(0u64));

    let spec2 = write_file(
        dir.path(),
        "c2.json",
        r#"{"group": {"free_rank": 0, "torsion": [3]}, "degree": [1], "blocks": [[[1],[1]]]}"#,
    );
    let out = run(&["count", "--spec", &spec2]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["on_diagonal"], Value::Bool(true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn count_bielliptic_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "b.json",
        r#"{
          "group": {"free_rank": 0, "torsion": [5]},
          "t": 1, "g": 2,
          "delta_prime_points": [[1],[4]],
          "delta_dprime_points": [[2],[3]],
          "delta": [0],
          "delta_prime": [0]
        }"#,
    );
    let v = stdout_json(&["count-bielliptic", "--spec", &spec]);
    assert_eq!(v["xi"], Value::from(0u64));
    assert_eq!(v["xi_tilde"], Value::from(0u64));
}

#[test]
fn search_witness_round_trips_through_count() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "s.json",
        r#"{"group": {"free_rank": 0, "torsion": [3]}, "degree": [1,1,1,1,1], "mode": "exhaustive"}"#,
    );
    let result = stdout_json(&["search", "--spec", &spec]);
    assert_eq!(result["best_xi"], Value::from(10u64));
    assert_eq!(result["exhaustive"], Value::Bool(true));
    assert_eq!(result["module_rank"], Value::from(6u64));

    // thread-parallel run is bit-identical
    let threaded = stdout_json(&["search", "--spec", &spec, "--threads", "3"]);
    assert_eq!(threaded, result);

    let witness = write_file(dir.path(), "w.json", &result["witness"].to_string());
    let count = stdout_json(&["count", "--spec", &witness]);
    assert_eq!(count["xi"], result["best_xi"]);
    assert_eq!(count["total_sum_zero"], Value::Bool(true));
    assert_eq!(count["on_diagonal"], Value::Bool(false));
}

#[test]
fn search_cache_hits_and_bypasses() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache_arg = cache.to_string_lossy().into_owned();
    let spec = write_file(
        dir.path(),
        "s.json",
        r#"{"group": {"free_rank": 0, "torsion": [4]}, "degree": [1,1,1,2], "mode": "exhaustive"}"#,
    );
    let first = stdout_json(&["search", "--spec", &spec, "--cache", &cache_arg]);
    assert_eq!(first["cached"], Value::Bool(false));
    let second = stdout_json(&["search", "--spec", &spec, "--cache", &cache_arg]);
    assert_eq!(second["cached"], Value::Bool(true));
    assert_eq!(second["best_xi"], first["best_xi"]);
    let third = stdout_json(&[
        "search",
        "--spec",
        &spec,
        "--cache",
        &cache_arg,
        "--no-cache",
    ]);
    assert_eq!(third["cached"], Value::Bool(false));

    // corrupt a cache line: remaining valid entries still hit, stderr warns
    let path = cache.join("runs.jsonl");
    let mut content = std::fs::read_to_string(&path).unwrap();
    content = format!("{{broken\n{content}");
    std::fs::write(&path, content).unwrap();
    let out = run(&["search", "--spec", &spec, "--cache", &cache_arg]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupted cache line"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cached"], Value::Bool(true));
}

#[test]
fn sweep_finds_all_even_targets_over_z6() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "s.json",
        r#"{"group": {"free_rank": 0, "torsion": [6]}, "degree": [1,1,1,1,1], "mode": "exhaustive"}"#,
    );
    let rows = stdout_json(&["sweep", "--spec", &spec, "--targets", "0..10"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row["found"], Value::Bool(true), "row {row}");
    }
    // range syntax keeps only even values; an explicit odd target is a usage error
    let rows = stdout_json(&["sweep", "--spec", &spec, "--targets", "0..3"]);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    let out = run(&["sweep", "--spec", &spec, "--targets", "0,3"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "odd listed target must be a usage error"
    );
}

#[test]
fn snf_and_member_on_published_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(
        dir.path(),
        "m.json",
        r#"{"rows": 3, "cols": 3, "entries": [[2,0,0],[0,3,0],[0,0,1]]}"#,
    );
    let v = stdout_json(&["snf", "--matrix", &matrix]);
    assert_eq!(v["rank"], Value::from(3u64));
    assert_eq!(v["invariant_factors"], serde_json::json!([1, 1, 6]));
    let m = stdout_json(&["member", "--matrix", &matrix, "--vector", "2,3,1"]);
    assert_eq!(m["contains"], Value::Bool(true));
    let m = stdout_json(&["member", "--matrix", &matrix, "--vector", "1,0,0"]);
    assert_eq!(m["contains"], Value::Bool(false));
}

#[test]
fn verify_subcommands_exit_zero() {
    for args in [
        vec!["verify", "table1"],
        vec!["verify", "dim5"],
        vec!["verify", "monotonicity", "--gmax", "10"],
        vec!["verify", "varley", "--gmax", "8"],
        vec!["verify", "identities", "--degmax", "6"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn dim5_csv_matches_golden() {
    let got = stdout(&["verify", "dim5", "--format", "csv"]);
    // stdout carries the pass/fail lines first; compare the CSV written to a file
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("dim5.csv");
    let out = run(&[
        "verify",
        "dim5",
        "--format",
        "csv",
        "--out",
        &out_path.to_string_lossy(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read(&out_path).unwrap();
    let golden = include_bytes!("golden/dim5.csv");
    assert_eq!(written, golden, "dim5 CSV drifted from the golden file");
    assert!(got.contains("achievable"));
}

#[test]
fn table1_csv_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("table1.csv");
    let out = run(&[
        "verify",
        "table1",
        "--format",
        "csv",
        "--out",
        &out_path.to_string_lossy(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read(&out_path).unwrap();
    let golden = include_bytes!("golden/table1.csv");
    assert_eq!(written, golden, "table1 CSV drifted from the golden file");
}

#[test]
fn malformed_spec_reports_json_path() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "bad.json",
        r#"{"group": {"free_rank": 0, "torsion": [3]}, "degree": [1], "blocks": [[[1],"x"]]}"#,
    );
    let out = run(&["count", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("blocks"),
        "error should name the JSON path, got: {err}"
    );
}

#[test]
fn fixture_data_file_matches_embedded_table() {
    let text = include_str!("../data/table1.json");
    let v: Value = serde_json::from_str(text).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let fixtures = prymgauss::fixtures::table1();
    assert_eq!(rows.len(), fixtures.len());
    for (row, fx) in rows.iter().zip(fixtures) {
        assert_eq!(row["xi_half"], Value::from(fx.xi_half));
        assert_eq!(row["rank"], Value::from(fx.rank as u64));
        let degree: Vec<u64> = row["degree"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .collect();
        assert_eq!(
            degree,
            fx.parts.iter().map(|&p| u64::from(p)).collect::<Vec<_>>()
        );
        let group: prymgauss::abelian::AbelianGroup =
            serde_json::from_value(row["group"].clone()).unwrap();
        assert_eq!(group, fx.group());
        let config: prymgauss::counting::Configuration =
            serde_json::from_value(serde_json::json!({
                "group": row["group"],
                "degree": row["degree"],
                "blocks": row["blocks"],
            }))
            .unwrap();
        assert_eq!(config, fx.configuration());
    }
}
