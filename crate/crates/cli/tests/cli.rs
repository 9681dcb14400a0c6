//! End-to-end runs of the `facekit` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TRIANGLE_H: &str = r#"{"dim":2,"rows":[
  {"coeffs":["-1","0"],"rhs":"0","rel":"le"},
  {"coeffs":["0","-1"],"rhs":"0","rel":"le"},
  {"coeffs":["1","1"],"rhs":"1","rel":"le"}]}"#;
const TRIANGLE_V: &str = r#"{"vertices":[["0","0"],["1","0"],["0","1"]]}"#;
const CUBE_V: &str = r#"{"vertices":[["0","0","0"],["1","0","0"],["0","1","0"],["1","1","0"],
  ["0","0","1"],["1","0","1"],["0","1","1"],["1","1","1"]]}"#;
const HALVES: &str = r#"{"atoms":[{"loc":["0"],"w":"1/2"},{"loc":["1"],"w":"1/2"}]}"#;
const GEO_HALF: &str = r#"{"kind":"geometric","ratio":"1/2"}"#;

fn facekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facekit"))
        .args(args)
        .env_remove("FACEKIT_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = facekit(&all);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn face_of_point_names_the_forced_row() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.json", TRIANGLE_H);
    let v = json(&["face-of-point", "--set", s(&tri), "--point", "[1/2, 0]"]);
    assert_eq!(v["cell"]["forced_eq"], serde_json::json!([1]));
    assert_eq!(v["cell"]["strict"], serde_json::json!([0, 2]));
    assert_eq!(v["rai"], false);
    assert_eq!(json(&["rai-test", "--set", s(&tri), "--point", "[1/4, 1/4]"])["rai"], true);
}

#[test]
fn points_outside_the_set_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.json", TRIANGLE_H);
    let out = facekit(&["rai-test", "--set", s(&tri), "--point", "[2, 2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn partition_and_faces_count_cells() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.json", TRIANGLE_V);
    let cube = write(dir.path(), "cube.json", CUBE_V);
    assert_eq!(json(&["faces", "--set", s(&tri)])["count"], 7);
    assert_eq!(json(&["faces", "--set", s(&cube)])["count"], 27);
    let out = facekit(&["partition", "--set", s(&tri), "--samples", "30"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("7 cells"));
    assert!(text.contains("30 samples, each in exactly one cell: true"));
}

#[test]
fn gen_is_seeded_and_bounded() {
    let a = json(&["gen", "--seed", "7", "--dim", "3", "--vertices", "5"]);
    let b = json(&["gen", "--seed", "7", "--dim", "3", "--vertices", "5"]);
    assert_eq!(a, b);
    assert_eq!(a["vertices"].as_array().unwrap().len(), 5);
    let h = json(&["gen", "--seed", "7", "--dim", "2", "--rows", "6"]);
    assert_eq!(h["rows"].as_array().unwrap().len(), 6);
    assert_eq!(facekit(&["gen", "--dim", "9", "--vertices", "3"]).status.code(), Some(2));
}

#[test]
fn seed_defaults_come_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_facekit"));
        c.args(["--format", "json", "gen", "--dim", "2", "--vertices", "4"]).args(args);
        match env {
            Some(v) => c.env("FACEKIT_SEED", v),
            None => c.env_remove("FACEKIT_SEED"),
        };
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("11"), &[]), run(None, &["--seed", "11"]));
    assert_eq!(run(None, &[]), run(None, &["--seed", "42"]));
}

#[test]
fn laws_exit_status_tracks_failures() {
    let ok = json(&["laws", "--law", "conv", "--count", "3"]);
    assert_eq!(ok["summary"]["passed"], 3);
    let bad = facekit(&["laws", "--law", "conv", "--count", "2", "--mutation", "flip-verdict"]);
    assert_eq!(bad.status.code(), Some(1));
    let unknown = facekit(&["laws", "--law", "no-such-law"]);
    assert_eq!(unknown.status.code(), Some(2));
    let refused = facekit(&["laws", "--law", "pmf-laws", "--count", "1", "--mutation", "inflate-eps"]);
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn sequential_and_parallel_reports_match() {
    let strip = |mut v: Value| {
        v["summary"]["wall_ms"] = Value::Null;
        v
    };
    let par = json(&["laws", "--law", "facex", "--count", "4", "--seed", "3", "--jobs", "2"]);
    let seq = json(&["laws", "--law", "facex", "--count", "4", "--seed", "3", "--sequential"]);
    assert_eq!(strip(par), strip(seq));
}

#[test]
fn suite_reports_replay_their_counterexamples() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.jsonl");
    let out = facekit(&[
        "suite", "run", "--law", "main-theorem", "--seed", "5", "--count", "3", "--mutation", "corrupt-face", "--out", s(&report),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = fs::read_to_string(&report).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3]["summary"]["count"], 3);
    assert_eq!(lines[3]["summary"]["failed"], 3);

    // a full report line and the bare counterexample both replay
    let line = write(dir.path(), "line.json", &serde_json::to_string(&lines[0]).unwrap());
    let bare = write(dir.path(), "cx.json", &serde_json::to_string(&lines[0]["counterexample"]).unwrap());
    for p in [line, bare] {
        let r = json(&["replay", "--in", s(&p)]);
        assert_eq!(r["reproduced"], true);
        assert_eq!(r["regenerated_matches"], true);
        assert_eq!(r["outcome"], lines[0]["counterexample"]["outcome"]);
    }
}

#[test]
fn clean_suites_write_only_passing_records() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("ok.jsonl");
    let out = facekit(&["suite", "run", "--law", "cc-laws", "--count", "2", "--out", s(&report)]);
    assert!(out.status.success());
    let text = fs::read_to_string(&report).unwrap();
    for l in text.lines().take(2) {
        let v: Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["passed"], true);
        assert!(v.get("counterexample").is_none());
    }
    let listed = String::from_utf8(facekit(&["suite", "list"]).stdout).unwrap();
    assert_eq!(listed.lines().count(), 20);
    assert!(listed.contains("ri2=ri"));
}

#[test]
fn pmf_verbs() {
    let hall = format!(r#"{{"kind":"hall_of","inner":{GEO_HALF}}}"#);
    let t = json(&["pmf", "face-test", "--p", GEO_HALF, "--q", &hall]);
    assert_eq!(t["member"], false);
    assert_eq!(t["analysis"]["sup"]["kind"], "infinite");

    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", GEO_HALF);
    let point = r#"{"kind":"finite","support":[[1,"1"]]}"#;
    let t = json(&["pmf", "face-test", "--p", &format!("@{}", s(&p)), "--q", point]);
    assert_eq!(t["member"], true);
    assert_eq!(t["analysis"]["sup"]["bound"]["hi"], "2");

    let third = r#"{"kind":"geometric","ratio":"1/3"}"#;
    assert_eq!(json(&["pmf", "rai-test", "--p", GEO_HALF, "--q", third])["rai"], false);
    assert_eq!(json(&["pmf", "chain", "--t", "2", "--q", r#"{"kind":"power","exponent":"3"}"#])["member"], true);
    assert_eq!(json(&["pmf", "chain", "--t", "2", "--q", r#"{"kind":"power","exponent":"2"}"#])["member"], false);
    assert_eq!(json(&["pmf", "closure", "--p", GEO_HALF])["from"], 1);
    let trunc = format!(r#"{{"kind":"truncation","inner":{GEO_HALF},"k":3}}"#);
    let tv = json(&["pmf", "tv", "--p", GEO_HALF, "--q", &trunc]);
    assert_eq!((tv["value"]["lo"].as_str(), tv["value"]["hi"].as_str()), (Some("1/4"), Some("1/4")));
}

#[test]
fn convex_core_probe() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", HALVES);
    let v = json(&["cc", "--measure", s(&m), "--probe", "[1/4]"]);
    assert_eq!(v["cc"]["verdict"], "inside");
    assert_eq!(v["cc"]["witness"]["weights"], serde_json::json!(["3/4", "1/4"]));
    assert_eq!(v["cc"]["witness"]["density_bound"], "3/2");
    assert_eq!(v["rai"], true);
    let edge = json(&["cc", "--measure", s(&m), "--probe", "[0]"]);
    assert_eq!((edge["rai"].clone(), edge["rai_face_route"].clone()), (Value::Bool(false), Value::Bool(false)));
}
