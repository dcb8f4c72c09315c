use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K22: &str = r#"{"levels": 2,
  "vertices": [{"id": "a", "level": 1}, {"id": "b", "level": 1}, {"id": "c", "level": 2}, {"id": "d", "level": 2}],
  "edges": [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]}"#;

const PATH: &str = r#"{"levels": 3,
  "vertices": [{"id": "p", "level": 1}, {"id": "q", "level": 2}, {"id": "r", "level": 3}],
  "edges": [["p", "q"], ["q", "r"]]}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_planarity-ht"));
    c.env_remove("PLANARITY_HT_BUDGET");
    c
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn summary(o: &Output) -> Value {
    let out = String::from_utf8_lossy(&o.stdout);
    let last = out.lines().last().unwrap_or_default();
    serde_json::from_str(last).unwrap_or_else(|e| panic!("bad json {last:?}: {e}"))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let k22 = put(&dir, "k22.json", K22);
    let path = put(&dir, "path.json", PATH);
    assert_eq!(code(&run(&["check", "--mode", "level", s(&k22)])), 1);
    assert_eq!(code(&run(&["check", "--mode", "radial", s(&k22)])), 0);
    assert_eq!(code(&run(&["check", "--mode", "level", s(&path)])), 0);
    assert_eq!(code(&run(&["check", "--mode", "radial", "--full", s(&path)])), 0);
    let o = run(&["--json", "check", "--mode", "level", "--full", s(&k22)]);
    assert_eq!(code(&o), 1);
    let j = summary(&o);
    assert_eq!(j["planar"], false);
    assert_eq!(j["system"], "full");
}

#[test]
fn check_witness_files() {
    let dir = TempDir::new().unwrap();
    let k22 = put(&dir, "k22.json", K22);
    let w = dir.path().join("w.json");
    let o = run(&["--json", "check", "--mode", "radial", s(&k22), "--witness", s(&w)]);
    assert_eq!(code(&o), 0);
    let crossings = summary(&o)["witnessCrossings"].clone();
    assert!(w.exists());
    assert!(dir.path().join("w.graph.json").exists());
    let o = run(&["--json", "render", s(&w), s(&dir.path().join("w.graph.json"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(summary(&o)["crossings"], crossings);
}

#[test]
fn emit_constraints_counts() {
    let dir = TempDir::new().unwrap();
    let two =
        put(&dir, "two.json", r#"{"levels":1,"vertices":[{"id":"u","level":1},{"id":"w","level":1}],"edges":[]}"#);
    let three = put(
        &dir,
        "three.json",
        r#"{"levels":1,"vertices":[{"id":"u","level":1},{"id":"v","level":1},{"id":"w","level":1}],"edges":[]}"#,
    );
    let lines = |o: &Output, needle: &str| {
        String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.starts_with('#') && l.contains(needle)).count()
    };
    let o = run(&["emit-constraints", "--mode", "level", "--full", s(&two)]);
    assert_eq!(code(&o), 0);
    assert_eq!(lines(&o, "="), 1);
    assert_eq!(lines(&o, "->"), 0);
    let o = run(&["emit-constraints", "--mode", "level", "--full", s(&three)]);
    assert_eq!(lines(&o, "="), 3);
    assert_eq!(lines(&o, "->"), 6);
    let o = run(&["emit-constraints", "--mode", "level", "--reduced", s(&three)]);
    assert_eq!(lines(&o, "->"), 0);
    let j = summary(&run(&["--json", "emit-constraints", "--mode", "radial", "--stage", "gplus", s(&three)]));
    assert_eq!(j["system"], "reduced");
    assert_eq!(j["transitivity"], 0);
}

#[test]
fn oracle_decisions_and_budget() {
    let dir = TempDir::new().unwrap();
    let k22 = put(&dir, "k22.json", K22);
    let path = put(&dir, "path.json", PATH);
    let o = run(&["--json", "oracle", "--mode", "level", s(&k22)]);
    assert_eq!(code(&o), 1);
    assert_eq!(summary(&o)["statesExamined"], 4);
    let o = run(&["--json", "oracle", "--mode", "level", s(&path)]);
    assert_eq!(code(&o), 0);
    assert_eq!(summary(&o)["statesExamined"], 1);

    let mut vs = Vec::new();
    for l in 1..=4 {
        for j in 0..4 {
            vs.push(format!(r#"{{"id":"v{l}{j}","level":{l}}}"#));
        }
    }
    let big = put(&dir, "big.json", &format!(r#"{{"levels":4,"vertices":[{}],"edges":[]}}"#, vs.join(",")));
    assert_eq!(code(&run(&["oracle", "--mode", "level", "--budget", "10", s(&big)])), 3);
    let o = bin().env("PLANARITY_HT_BUDGET", "10").args(["oracle", "--mode", "radial", s(&big)]).output().unwrap();
    assert_eq!(code(&o), 3);
    let o = bin()
        .env("PLANARITY_HT_BUDGET", "10")
        .args(["oracle", "--mode", "level", "--budget", "1000000", s(&big)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn render_markers() {
    let dir = TempDir::new().unwrap();
    let path = put(&dir, "path.json", PATH);
    let d = put(&dir, "d.json", r#"{"kind":"level","orders":{"1":["p"],"2":["q"],"3":["r"]}}"#);
    let svg = dir.path().join("out.svg");
    let o = run(&["--json", "render", s(&d), s(&path), "--out", s(&svg)]);
    assert_eq!(code(&o), 0);
    assert_eq!(summary(&o)["markers"], 0);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let k22 = put(&dir, "k22.json", K22);
    let w = dir.path().join("ow.json");
    assert_eq!(code(&run(&["oracle", "--mode", "radial", s(&k22), "--witness", s(&w)])), 0);
    let j = summary(&run(&["--json", "render", s(&w), s(&dir.path().join("ow.graph.json"))]));
    assert_eq!(j["kind"], "radial");
    assert_eq!(j["markers"], 0);

    let long = put(
        &dir,
        "long.json",
        r#"{"levels":3,"vertices":[{"id":"a","level":1},{"id":"b","level":1},{"id":"e","level":3},{"id":"f","level":3}],
            "edges":[["a","e"],["b","f"]]}"#,
    );
    let even =
        put(&dir, "even.json", r#"{"kind":"level","orders":{"1":["a","b"],"2":["b~f~2","a~e~2"],"3":["e","f"]}}"#);
    let j = summary(&run(&["--json", "render", s(&even), s(&long)]));
    assert_eq!(j["crossings"], 2);
    assert_eq!(j["markers"], 2);
    assert_eq!(j["oddIndependentPairs"], 0);
}

#[test]
fn crosscheck_corpus_and_random() {
    let dir = TempDir::new().unwrap();
    put(&dir, "k22.json", K22);
    put(&dir, "path.json", PATH);
    let o = run(&["--json", "crosscheck", s(dir.path())]);
    assert_eq!(code(&o), 0);
    let j = summary(&o);
    assert_eq!(j["instances"], 2);
    assert_eq!(j["levelPlanar"], 1);
    assert_eq!(j["radialPlanar"], 2);
    let o = run(&["--json", "crosscheck", "--random", "50", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(summary(&o)["instances"], 50);
    assert_eq!(summary(&o)["mismatches"], serde_json::json!([]));
}

#[test]
fn errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = put(&dir, "bad.json", "{not json");
    let o = run(&["--json", "check", "--mode", "level", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert_eq!(summary(&o)["exitCode"], 2);
    assert_eq!(code(&run(&["check", "--mode", "level", s(&dir.path().join("missing.json"))])), 2);
    let cyc = put(
        &dir,
        "down.json",
        r#"{"levels":2,"vertices":[{"id":"a","level":2},{"id":"b","level":1}],"edges":[["a","b"]]}"#,
    );
    assert_eq!(code(&run(&["check", "--mode", "radial", s(&cyc)])), 2);
}
