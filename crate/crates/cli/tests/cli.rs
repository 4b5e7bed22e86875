use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const Q3: &str = "8 12\n0 1\n0 2\n0 4\n1 3\n1 5\n2 3\n2 6\n3 7\n4 5\n4 6\n5 7\n6 7\n";
const K23: &str = "# K_{2,3}\n5 6\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n";
const C4: &str = "4 4\n0 1\n1 2\n2 3\n3 0\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().expect("temporary directory"),
        }
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, content).expect("write input");
        path
    }
}

fn pcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcube"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = pcube(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{args:?} printed non-JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    (out.status.code().expect("exit code"), json)
}

fn arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn recognizes_q3() {
    let ws = Workspace::new();
    let q3 = ws.file("q3.txt", Q3);
    let (code, v) = run(&["recognize", "-i", arg(&q3)]);
    assert_eq!(code, 0);
    assert_eq!(v["partial_cube"], true);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["coordinates"]["7"], "111");
    assert!(v["paper_ref"].is_string());
}

#[test]
fn rejects_k23_with_a_witness() {
    let ws = Workspace::new();
    let k23 = ws.file("k23.txt", K23);
    let (code, v) = run(&["recognize", "-i", arg(&k23)]);
    assert_eq!(code, 2);
    assert_eq!(v["partial_cube"], false);
    assert!(v["rejection"]["reason"].is_string());
}

#[test]
fn hull_number_of_q3_by_every_method() {
    let ws = Workspace::new();
    let q3 = ws.file("q3.txt", Q3);
    let (code, v) = run(&["hullnum", "-i", arg(&q3), "--method", "all"]);
    assert_eq!(code, 0);
    assert_eq!(v["hull_number"], 2);
    assert_eq!(v["methods_agree"], true);
    assert_eq!(v["witness"], serde_json::json!([0, 7]));
}

#[test]
fn hulls_are_sorted_id_lists() {
    let ws = Workspace::new();
    let c4 = ws.file("c4.txt", C4);
    let (code, v) = run(&["hull", "-i", arg(&c4), "--set", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["hull"], serde_json::json!([0, 1]));
    assert_eq!(v["convex"], true);
    let (_, v) = run(&["hull", "-i", arg(&c4), "--set", "0,2", "--method", "closure"]);
    assert_eq!(v["hull"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(v["is_hull_set"], true);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let bad = ws.file("bad.txt", "3 1\n0 7\n");
    assert_eq!(pcube(&["recognize", "-i", arg(&bad)]).status.code(), Some(1));
    assert_eq!(pcube(&["recognize", "-i", "/does/not/exist"]).status.code(), Some(1));
    let c5 = ws.file("c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    assert_eq!(pcube(&["hullnum", "-i", arg(&c5)]).status.code(), Some(2));
    let path: String = std::iter::once("30 29\n".to_string())
        .chain((0..29).map(|v| format!("{v} {}\n", v + 1)))
        .collect();
    let big = ws.file("big.txt", &path);
    let out = pcube(&["hullnum", "-i", arg(&big), "--method", "brute"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn reads_standard_input_and_writes_files() {
    let ws = Workspace::new();
    let target = ws.dir.path().join("out.json");
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcube"))
        .args(["recognize", "-i", "-", "-o", arg(&target)])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(C4.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["dimension"], 2);
}

#[test]
fn text_format() {
    let ws = Workspace::new();
    let c4 = ws.file("c4.txt", C4);
    let out = pcube(&["recognize", "-i", arg(&c4), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "dimension: 2"));
}

#[test]
fn sat_commands() {
    let ws = Workspace::new();
    let f1 = ws.file("f1.cnf", "c two clauses\np cnf 2 2\n1 2 0\n-1 -2 0\n");
    let (code, v) = run(&["sat-verify", "-i", arg(&f1)]);
    assert_eq!(code, 0);
    assert_eq!(v["satisfiable"], true);
    assert_eq!(v["biconditional_holds"], true);
    assert_eq!(v["cuts"]["total"], 5);

    let (code, v) = run(&["sat-gadget", "-i", arg(&f1)]);
    assert_eq!(code, 0);
    assert_eq!(v["cuts"], 5);
    assert_eq!(v["n"], 2);

    let unsat = ws.file("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let (code, v) = run(&["sat-verify", "-i", arg(&unsat)]);
    assert_eq!(code, 0);
    assert_eq!(v["satisfiable"], false);

    let wide = ws.file("wide.cnf", "p cnf 4 1\n1 2 3 4 0\n");
    assert_eq!(pcube(&["sat-verify", "-i", arg(&wide)]).status.code(), Some(1));
}

#[test]
fn standard_example_has_dimension_three() {
    let ws = Workspace::new();
    let s3 = ws.file("s3.txt", "6\n0 4\n0 5\n1 3\n1 5\n2 3\n2 4\n");
    let (code, v) = run(&["poset-dim", "-i", arg(&s3), "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["brute_force_dimension"], 3);
    assert_eq!(v["realizer"].as_array().unwrap().len(), 3);
    let cyclic = ws.file("cyclic.txt", "2\n0 1\n1 0\n");
    assert_eq!(pcube(&["poset-dim", "-i", arg(&cyclic)]).status.code(), Some(1));
}

#[test]
fn quadrangulation_modes() {
    let ws = Workspace::new();
    let c4 = ws.file("c4.txt", C4);
    let rot = ws.file("c4.rot", "1 3\n2 0\n3 1\n0 2\n");
    let (code, v) = run(&[
        "quad-hullnum",
        "-i",
        arg(&c4),
        "--mode",
        "strict",
        "--rotation",
        arg(&rot),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["hull_number"], 2);
    assert_eq!(v["mode"], "strict");
    let grid = ws.file(
        "grid.txt",
        "9 12\n0 1\n1 2\n3 4\n4 5\n6 7\n7 8\n0 3\n3 6\n1 4\n4 7\n2 5\n5 8\n",
    );
    let (code, v) = run(&["quad-hullnum", "-i", arg(&grid)]);
    assert_eq!(code, 0);
    assert_eq!(v["hull_number"], 2);
    assert_eq!(v["h_v"][4], Value::Null);
    assert_eq!(v["rejected"][0]["v"], 4);
    assert_eq!(
        pcube(&["quad-hullnum", "-i", arg(&c4), "--mode", "strict"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn lattice_export_and_reimport() {
    let ws = Workspace::new();
    let q3 = ws.file("q3.txt", Q3);
    let (code, v) = run(&[
        "lattice",
        "-i",
        arg(&q3),
        "--base",
        "0",
        "--check-uld",
        "--verify-embedding",
        "--hullnum",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["uld"]["uld"], true);
    assert_eq!(v["hull_number"]["size"], 2);
    let exported = ws.file("l.json", &v["lattice"].to_string());
    let (code, w) = run(&["lattice", "--lattice", arg(&exported), "--check-uld"]);
    assert_eq!(code, 0);
    assert_eq!(w["lattice"], v["lattice"]);

    let k23 = ws.file("k23.txt", K23);
    let failing: Vec<i32> = (0..5)
        .map(|b| {
            pcube(&[
                "lattice",
                "-i",
                arg(&k23),
                "--base",
                &b.to_string(),
                "--check-uld",
                "--verify-embedding",
            ])
        })
        .map(|o| o.status.code().unwrap())
        .collect();
    assert!(failing.contains(&2), "{failing:?}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let ws = Workspace::new();
    let q3 = ws.file("q3.txt", Q3);
    for args in [
        vec!["hullnum", "-i", arg(&q3), "--method", "all"],
        vec!["lattice", "-i", arg(&q3), "--hullnum"],
        vec!["corpus", "--seed", "7"],
    ] {
        let a = pcube(&args);
        let b = pcube(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn corpus_reports_every_section() {
    let (code, v) = run(&["corpus"]);
    let sections = v["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 8);
    let failing: Vec<&str> = sections
        .iter()
        .filter(|s| !s["failures"].as_array().unwrap().is_empty())
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["poset_log_bound"]);
    assert_eq!(code, 2);
}
