use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn crepant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crepant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn nested_datum_validates() {
    let dir = TempDir::new().unwrap();
    let f = fixture(
        &dir,
        "six_b.txt",
        "sets d=4\n{1,2,3,4}:1 {1,2}:2 {1}:6 {2}:6 {3}:2 {4}:2\n",
    );
    let o = crepant(&["validate", s(&f), "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("valid: true\n"));
    assert!(out.contains("{1,2}:2"));
    assert!(out.contains("[k1,2 = 3]"));
}

#[test]
fn violated_clause_is_named() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "bad.txt", "sets d=3\n{1}:2 {2}:4 {1,2}:1 {3}:1\n");
    let o = crepant(&["validate", s(&f), "--no-timing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("clause (v)"), "{}", stdout(&o));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = TempDir::new().unwrap();
    let empty = fixture(&dir, "empty.txt", "");
    let o = crepant(&["validate", s(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    let broken = fixture(&dir, "broken.txt", "sets d=3\n{1}:2 {2:2\n");
    let o = crepant(&["build", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at 2:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(crepant(&["build"]).status.code(), Some(2));
    assert_eq!(crepant(&["build", "x", "--export", "stl:out"]).status.code(), Some(2));
    assert_eq!(crepant(&["resolve", "--lattice", "seven"]).status.code(), Some(2));
}

#[test]
fn small_star_builds_four_cells() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "star.txt", "forest\n(2: * * *)\n");
    let off = dir.path().join("cells.off");
    let export = format!("off:{}", off.display());
    let o = crepant(&["build", s(&f), "--no-timing", "--lambda-trace", "--export", &export]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("triangulation: 6 vertices, 4 cells"));
    assert!(out.contains("overall true"));
    assert!(out.contains("ε per refinement"));
    let body = std::fs::read_to_string(off).unwrap();
    assert!(body.starts_with("OFF\n6 4 0\n"));
}

#[test]
fn two_segment_forest() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "segments.txt", "forest\n(3: * *) (5: * *)\n");
    let o = crepant(&["build", s(&f), "--no-timing"]);
    assert!(stdout(&o).contains("15 cells"));
    let o = crepant(&["cohomology", s(&f), "--no-timing", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cohomology"]["dims"], serde_json::json!([1, 6, 8, 0]));
    assert_eq!(v["cohomology"]["routes"].as_array().unwrap().len(), 3);
    assert!(v.get("seconds").is_none());
}

#[test]
fn hypersurface_resolution() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "four_two.txt", "forest\n(2: * * * *)\n");
    let o = crepant(&["resolve", s(&f), "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("8 cones"));
    assert!(out.contains("crepant: true"));
    assert!(out.contains("smooth: true"));
    let f = fixture(&dir, "four_three.txt", "forest\n(3: * * * *)\n");
    let o = crepant(&["cohomology", s(&f), "--no-timing"]);
    assert!(stdout(&o).contains("Euler characteristic: 27"));
}

#[test]
fn direct_lattice_input() {
    let o = crepant(&["resolve", "--lattice", "7:3,3,1", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("age 1").count(), 3);
    for p in ["(1/7)(3,3,1)", "(1/7)(2,2,3)", "(1/7)(1,1,5)"] {
        assert!(out.contains(p));
    }
    assert!(out.contains("7 cones"));
    assert!(out.contains("crepant: true"));
}

#[test]
fn trivial_group() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "trivial.txt", "sets d=3\n{1}:1 {2}:1 {3}:1\n");
    let o = crepant(&["resolve", s(&f), "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 cones"));
    let o = crepant(&["cohomology", s(&f), "--no-timing"]);
    assert!(stdout(&o).contains("Euler characteristic: 1"));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "star.txt", "forest\n(3: * * *)\n");
    for cmd in ["build", "resolve", "cohomology"] {
        for format in ["text", "structured"] {
            let a = crepant(&[cmd, s(&f), "--no-timing", "--format", format]);
            let b = crepant(&[cmd, s(&f), "--no-timing", "--format", format]);
            assert_eq!(a.stdout, b.stdout, "{cmd} {format}");
        }
    }
}

#[test]
fn export_to_stdout() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "star.txt", "forest\n(2: * * *)\n");
    let o = crepant(&["export", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("OFF\n"));
    assert!(!out.contains("time:"));
    let big = fixture(&dir, "big.txt", "forest\n(2: * * * * *)\n");
    assert_eq!(crepant(&["export", s(&big)]).status.code(), Some(2));
}
