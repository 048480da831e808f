use std::process::{Command, Output};

use serde_json::Value;

fn dc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dc")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(dc(&["analyze", "1234", "1234", "4321"]).status.code(), Some(0));
    assert_eq!(dc(&["analyze", "123", "1234", "4321"]).status.code(), Some(2));
    assert_eq!(dc(&["analyze", "1224", "1234", "4321"]).status.code(), Some(2));
    assert_eq!(dc(&["move", "132", "213", "213", "2", "2", "3"]).status.code(), Some(2));
    assert_eq!(dc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dc(&["graph", "7"]).status.code(), Some(3));
    assert_eq!(dc(&["graph", "3", "--check"]).status.code(), Some(0));
}

#[test]
fn numbers_of_the_worked_examples() {
    for (u, v, w, expected) in [
        ("1324", "2143", "2341", 0),
        ("1324", "3142", "1423", 1),
        ("1234", "1234", "4321", 1),
        ("132", "213", "213", 1),
    ] {
        assert_eq!(json_of(&dc(&["number", u, v, w]))["value"], expected, "{u} {v} {w}");
    }
}

#[test]
fn move_and_path() {
    let v = json_of(&dc(&["move", "132", "213", "213", "2", "1", "3"]));
    assert_eq!(v["problem"]["w"], serde_json::json!([2, 3, 1]));
    let v = json_of(&dc(&["path", "1324", "3142", "1423"]));
    assert_eq!(v["found"], true);
    assert_eq!(v["end"]["w"], serde_json::json!([4, 3, 2, 1]));
}

#[test]
fn monk_proof() {
    let v = json_of(&dc(&["monk", "34152", "2", "31524"]));
    assert_eq!(v["value"], 1);
    assert_eq!(v["end"]["kind"], "easy");
}

#[test]
fn witness_expressions() {
    let out = dc(&["witness", "132", "213", "213", "--seed", "7"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("B_2 ∩ C_2"), "{text}");
    let v = json_of(&out);
    assert_eq!(v["verified"], serde_json::json!([true, true, true]));
    let again = json_of(&dc(&["witness", "132", "213", "213", "--seed", "7", "--field", "rational"]));
    assert_eq!(again["verified"], serde_json::json!([true, true, true]));
}

#[test]
fn graph_files_and_thread_independence() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    for t in ["1", "4"] {
        let out = dc(&[
            "graph",
            "4",
            "--out",
            &path(&format!("r{t}.json")),
            "--labels",
            &path(&format!("l{t}.bin")),
            "--threads",
            t,
        ]);
        assert!(out.status.success());
    }
    let r1 = std::fs::read(path("r1.json")).unwrap();
    assert_eq!(r1, std::fs::read(path("r4.json")).unwrap());
    assert_eq!(std::fs::read(path("l1.bin")).unwrap(), std::fs::read(path("l4.bin")).unwrap());

    let report: Value = serde_json::from_slice(&r1).unwrap();
    let labels = std::fs::read(path("l1.bin")).unwrap();
    assert_eq!(labels.len() as u64, 4 * report["vertices"].as_u64().unwrap());

    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(path("r1.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "graph");
    assert_eq!(manifest["artifacts"].as_array().unwrap().len(), 2);

    let v = json_of(&dc(&["graph", "3"]));
    assert_eq!(v["vertices"], 35);
    assert_eq!(v["trivial_free_components"], 1);
    assert_eq!(v["trivial_free_vertices"], 21);
}
