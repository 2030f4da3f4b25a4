//! End-to-end runs of the `fbas` binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const HUB: &str = r#"{
  "version": 1,
  "nodes": [
    {"name": "1", "slices": [["1", "2", "3", "7"]]},
    {"name": "2", "slices": [["1", "2", "3", "7"]]},
    {"name": "3", "slices": [["1", "2", "3", "7"]]},
    {"name": "4", "slices": [["4", "5", "6", "7"]]},
    {"name": "5", "slices": [["4", "5", "6", "7"]]},
    {"name": "6", "slices": [["4", "5", "6", "7"]]},
    {"name": "7", "slices": [["7"]]}
  ]
}"#;

const FOUR: &str = r#"{
  "version": 1,
  "nodes": [
    {"name": "a", "slices": [["a", "b"]]},
    {"name": "b", "slices": [["a", "b", "c", "d"]]},
    {"name": "c", "slices": [["b", "c"], ["c", "d"]]},
    {"name": "d", "slices": [["b", "d"], ["c", "d"]]}
  ]
}"#;

fn fbas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hub_quorums_and_intersection() {
    let dir = TempDir::new().unwrap();
    let hub = write(&dir, "hub.json", HUB);
    let o = fbas(&["quorums", s(&hub), "--oracle"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('{')).count(), 4, "{text}");
    assert!(text.contains("oracle: agrees"));

    let o = fbas(&["check-intersection", s(&hub), "--min-intersection", "--oracle"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "intersects: true\nmin-intersection: 1\noracle: agrees\n"
    );

    let o = fbas(&["--json", "sccs", s(&hub)]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["greatest"], serde_json::json!(["7"]));

    let o = fbas(&["--json", "dsets", s(&hub)]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dsets"].as_array().unwrap().len(), 5, "{v}");
}

#[test]
fn four_nodes_intact_set_is_empty() {
    let dir = TempDir::new().unwrap();
    let four = write(&dir, "four.json", FOUR);
    let o = fbas(&["--json", "intact", s(&four), "--ill-behaved", "a"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["intact"], serde_json::json!([]));
    assert_eq!(v["befouled"], serde_json::json!(["a", "b", "c", "d"]));

    let o = fbas(&["check-dset", s(&four), "--set", "a,b,c,d"]);
    assert_eq!(stdout(&o), "dset: true\n");
}

#[test]
fn stellar_core_count_from_generated_document() {
    let o = fbas(&[
        "generate",
        "orgs",
        "--sizes",
        "3,3,3,3,3,5",
        "--org-thresholds",
        "2,2,2,2,2,3",
        "--root-threshold",
        "5",
    ]);
    assert!(o.status.success());
    let dir = TempDir::new().unwrap();
    let doc = write(&dir, "stellar.json", &stdout(&o));
    let o = fbas(&["quorums", s(&doc), "--count-only"]);
    assert_eq!(stdout(&o), "114688\n");
}

#[test]
fn generated_documents_are_canonical() {
    let a = fbas(&["generate", "symmetric", "--nodes", "5", "--threshold", "3"]);
    let dir = TempDir::new().unwrap();
    let doc = write(&dir, "sym.json", &stdout(&a));
    let r1 = fbas(&["--json", "quorums", s(&doc), "--minimal"]);
    let r2 = fbas(&["--json", "quorums", s(&doc), "--minimal"]);
    assert_eq!(r1.stdout, r2.stdout);
    let v: Value = serde_json::from_slice(&r1.stdout).unwrap();
    // minimal quorums of (5, 3) with at most half the nodes: none
    assert_eq!(v["quorums"], serde_json::json!([]), "{v}");
    let b = fbas(&["generate", "symmetric", "--nodes", "5", "--threshold", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn standard_input_is_accepted() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fbas"))
        .args(["check-intersection", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(HUB.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "intersects: true\n");
}

#[test]
fn reduction_round_trip() {
    let dir = TempDir::new().unwrap();
    let sat = write(&dir, "sat.cnf", "p cnf 1 1\n1 1 1 0\n");
    let o = fbas(&["reduce-3sat", s(&sat)]);
    assert!(o.status.success());
    let doc = write(&dir, "sat.json", &stdout(&o));
    let o = fbas(&[
        "check-intersection",
        s(&doc),
        "--witness",
        "--expect-intersection",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: "));

    let unsat = write(&dir, "unsat.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
    let o = fbas(&["reduce-3sat", s(&unsat)]);
    let doc = write(&dir, "unsat.json", &stdout(&o));
    let o = fbas(&["check-intersection", s(&doc), "--expect-intersection"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        fbas(&["quorums", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    let bad = write(&dir, "bad.json", "{\"version\": 1, \"nodes\": [");
    let o = fbas(&["quorums", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = fbas(&["generate", "symmetric", "--nodes", "20", "--threshold", "11"]);
    let big = write(&dir, "big.json", &stdout(&o));
    assert_eq!(fbas(&["dsets", s(&big)]).status.code(), Some(3));
    assert_eq!(
        fbas(&["--quorum-cap", "10", "quorums", s(&big)]).status.code(),
        Some(3)
    );

    let o = fbas(&["generate", "symmetric", "--nodes", "4", "--threshold", "2"]);
    let split = write(&dir, "split.json", &stdout(&o));
    assert_eq!(fbas(&["intact", s(&split)]).status.code(), Some(1));
    assert_eq!(fbas(&["check-intersection", s(&split)]).status.code(), Some(0));
}

#[test]
fn probabilities_from_built_in_models() {
    let o = fbas(&["generate", "symmetric", "--nodes", "4", "--threshold", "3"]);
    let dir = TempDir::new().unwrap();
    let doc = write(&dir, "sym.json", &stdout(&o));
    let dist = write(
        &dir,
        "dist.json",
        r#"{"model": "independent", "p": {"1": 0.2, "2": 0.1, "3": 0.1, "4": 0.0}}"#,
    );
    let o = fbas(&[
        "--json",
        "intact-probability",
        s(&doc),
        "--distribution",
        s(&dist),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let p0 = v["results"][0]["p_intact"].as_f64().unwrap();
    assert!((p0 - 0.792).abs() < 1e-9, "{v}");

    let o = fbas(&[
        "intact-probability",
        s(&doc),
        "--model",
        "independent",
        "--p",
        "0.1",
        "--mc-samples",
        "5000",
        "--seed",
        "3",
    ]);
    let again = fbas(&[
        "intact-probability",
        s(&doc),
        "--model",
        "independent",
        "--p",
        "0.1",
        "--mc-samples",
        "5000",
        "--seed",
        "3",
    ]);
    assert!(o.status.success());
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn bench_reports_growth() {
    let o = fbas(&["bench", "--from", "2", "--to", "4", "--min-millis", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 6);
    assert!(text.contains("quorum counts strictly increasing: true"));
}
