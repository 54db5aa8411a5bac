use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqm"))
        .args(args)
        .env_remove("GQM_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = gqm(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn markdown_matches_golden_files() {
    assert_eq!(
        stdout(&gqm(&["prob-table", "--q", "2"])),
        golden("prob_table_q2.md")
    );
    assert_eq!(
        stdout(&gqm(&["corr-table", "--q", "2"])),
        golden("corr_table_q2.md")
    );
}

#[test]
fn json_round_trips() {
    let v = json(&["chsh", "--q", "2"]);
    assert_eq!(v["max_abs"], serde_json::json!({"num": 2, "den": 1}));
    assert_eq!(v["achiever_count"], 162);
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    let again: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(again, v);
    assert_eq!(v["metadata"]["command"], "chsh");
    assert!(v["metadata"]["content_hash"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));

    let hv = json(&["hv-check", "--q", "2", "--state", "S"]);
    assert_eq!(hv["verdict"], "no-hidden-variables");
    assert_eq!(hv["survivors"], serde_json::json!([]));
    assert_eq!(hv["forbidden"].as_array().unwrap().len(), 12);

    let states = json(&["two-states", "--q", "2"]);
    let list = states["states"].as_array().unwrap();
    assert_eq!(list.len(), 15);
    assert_eq!(list.iter().filter(|s| s["entangled"] == true).count(), 6);

    let ft = json(&["field-table", "--p", "3", "--n", "2"]);
    assert_eq!(ft["q"], 9);
    assert_eq!(ft["add"].as_array().unwrap().len(), 9);
}

#[test]
fn csv_row_counts() {
    let out = gqm(&["corr-table", "--q", "2", "--csv"]);
    assert!(out.status.success());
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.records().count(), 54);
    let out = gqm(&["prob-table", "--q", "3", "--signed", "--csv"]);
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.records().count(), 48);
}

#[test]
fn exit_codes() {
    assert_eq!(gqm(&["prob-table", "--q", "6"]).status.code(), Some(2));
    assert_eq!(gqm(&["hv-check", "--csv"]).status.code(), Some(2));
    assert_eq!(gqm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        gqm(&["chsh", "--q", "2", "--threads", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gqm(&["chsh", "--q", "2", "--json", "--csv"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.md");
    assert_eq!(
        gqm(&["prob-table", "--q", "2", "-o", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gqm(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_file_and_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gqm"))
        .args(["s6-census", "--q", "5", "--csv", "-o", "census.csv"])
        .env("GQM_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("census.csv")).unwrap();
    assert!(text.starts_with("cycle type,sign,S6,\"PGL(2,5)\"\n"));
    assert!(text.ends_with("total,,720,120\n"));
}

#[test]
fn hash_independent_of_threads() {
    let hash =
        |t: &str| json(&["chsh", "--q", "3", "--threads", t])["metadata"]["content_hash"].clone();
    assert_eq!(hash("1"), hash("4"));
    let md = |t: &str| {
        stdout(&gqm(&[
            "hv-check",
            "--q",
            "3",
            "--state",
            "[0,-1,1,0]",
            "--threads",
            t,
        ]))
    };
    assert_eq!(md("1"), md("3"));
}
