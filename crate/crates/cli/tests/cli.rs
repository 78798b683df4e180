use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn echain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_echain"))
        .args(args)
        .env_remove("ECOVER_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analyze_hexagon_csv() {
    let hex = data("hex.csv");
    let o = echain(&["analyze", "--input", &hex, "--scales", "2.1,1.8,1.2", "--basepoint", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 3);
    let inv: Vec<&str> = records.iter().map(|r| &r[col("invariants")]).collect();
    assert_eq!(inv, ["0", "0", "Z"]);
    let trivial: Vec<&str> = records.iter().map(|r| &r[col("trivial")]).collect();
    assert_eq!(trivial, ["yes", "yes", "no"]);
    assert!(records.iter().all(|r| &r[col("schema")] == "1"));
}

#[test]
fn analyze_writes_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let hex = data("hex.csv");
    let o = echain(&["analyze", "--input", &hex, "--scales", "2.1,1.8,1.2", "--out", out, "--format", "json,csv,svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["critical"], serde_json::json!([1]));
    let svg = std::fs::read_to_string(dir.path().join("report.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(dir.path().join("report.csv").exists());
}

#[test]
fn output_is_reproducible() {
    let hex = data("hex.csv");
    let args = ["analyze", "--input", hex.as_str(), "--scales", "2.1,1.8,1.2", "--jobs", "3"];
    let a = echain(&args);
    let b = echain(&args[..5]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validation_errors() {
    let hex = data("hex.csv");
    let o = echain(&["analyze", "--input", &hex, "--scales", "1.2,1.8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ladder not nested"));

    let o = echain(&["analyze", "--input", &hex, "--scales", "1.2", "--basepoint", "17"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("17"));

    let o = echain(&["analyze", "--input", &hex, "--scales", "1.2", "--format", "pdf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unsupported format"));

    let o = echain(&["analyze", "--input", "/nonexistent/points.csv", "--scales", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn headerless_csv_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    std::fs::write(&path, "0,1\n1,2\n").unwrap();
    let o = echain(&["analyze", "--input", path.to_str().unwrap(), "--scales", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("header"));
}

#[test]
fn scale_list_from_file_and_budget_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("ladder.txt");
    std::fs::write(&list, "# hexagon\n2.1\n1.8\n1.2\n").unwrap();
    let ladder = format!("@{}", list.display());
    let o = Command::new(env!("CARGO_BIN_EXE_echain"))
        .args(["analyze", "--input", &data("hex.csv"), "--scales", &ladder])
        .env("ECOVER_BUDGET", "4321")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["metadata"]["budget"], 4321);
    assert_eq!(json["scales"].as_array().unwrap().len(), 3);
}

#[test]
fn distance_table_with_e_short() {
    let p5 = data("p5.json");
    let o = echain(&["analyze", "--input", &p5, "--scales", "1.5,1.1", "--e-short", "0:0:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["e_short"][0]["result"], "holds");
    assert_eq!(json["e_short"][0]["checked"], 4);
}

#[test]
fn hidden_oracle_flag() {
    let o = echain(&["analyze", "--input", &data("hex.csv"), "--scales", "2.1,1.2", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("agree"));
}

#[test]
fn extract_grid_interval_relation() {
    let grid = data("grid.csv");
    let u = format!("@{}", data("u.json"));
    let o = echain(&["extract", "--input", &grid, "--basepoint", "24", "--outer", &u, "--inner", "0.6,0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["schema"], 1);
    let pairs: Vec<(u64, u64)> = json["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap(), p[1].as_u64().unwrap()))
        .collect();
    // grid ids are consecutive steps of 0.25, so |x - y| <= 0.75 means at most 3 ids apart
    let expected: Vec<(u64, u64)> = (0..49u64)
        .flat_map(|i| (i + 1..49).filter(move |j| j - i <= 3).map(move |j| (i, j)))
        .collect();
    assert_eq!(pairs, expected);
    assert_eq!(json["witnesses"].as_array().unwrap().len(), pairs.len());
}

#[test]
fn extract_degenerate_and_complete() {
    let hex = data("hex.csv");
    let o = echain(&["extract", "--input", &hex, "--outer", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no motion possible"));
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(json["pairs"].as_array().unwrap().is_empty());

    let o = echain(&["extract", "--input", &hex, "--outer", "2.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["pairs"].as_array().unwrap().len(), 15);
}

#[test]
fn demo_default_run() {
    let o = echain(&["exex"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("class of {0,3} outside A: CONFIRMED"));
    assert!(text.contains("extracted V-grid relation: CONFIRMED"));
    assert!(text.contains("witness {0,3}: CONFIRMED"));
}

#[test]
fn demo_coarser_grids() {
    let o = echain(&["exex", "--step", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).matches("CONFIRMED").count(), 3);
    assert!(!stdout(&o).contains("NOT CONFIRMED"));

    let o = echain(&["exex", "--step", "2.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degenerate grid"));
}
