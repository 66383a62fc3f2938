use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use koszulator::export::from_json;
use koszulator::{Config, GradedRing};

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszulator")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_all_passes_on_first_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_koszulator"))
        .current_dir(dir.path())
        .args(["verify-all", "--ring", &data("ex45.ring"), "--imax", "10"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAIL]"));
    assert!(!dir.path().join("koszulator-report.json").exists());
}

#[test]
fn betti_table_of_second_example() {
    let o = run(&["resolve", "--ring", &data("ex47.ring"), "--imax", "5", "--betti"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "betti 1,3,6,10,15,21"), "{}", stdout(&o));
}

#[test]
fn malformed_ring_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.ring");
    fs::write(&f, "field rational\nvars x,y\ngen x^2 + *y\n").unwrap();
    let o = run(&["cycles", "--ring", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column 11"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["cycles", "--ring", "/nonexistent/ring"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_complete_intersection_fails_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("nonci.ring");
    fs::write(&f, "field rational\nvars x,y\ngen x^2\ngen x*y\n").unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["verify-all", "--ring", path(&f), "--report", path(&report)]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn resolve_writes_a_deterministic_tree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["resolve", "--ring", &data("ex45.ring"), "--imax", "4", "--verify-all", "--out", path(d.path())]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let mut names: Vec<String> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut want = vec!["betti.csv".to_string(), "betti.txt".into(), "report.json".into()];
    for i in 1..=4 {
        want.extend([format!("dF_{i}.json"), format!("dF_{i}.svg"), format!("dF_{i}.txt")]);
    }
    want.sort();
    assert_eq!(names, want);
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap(), "{n}");
    }
    let csv = fs::read_to_string(a.path().join("betti.csv")).unwrap();
    assert!(csv.starts_with("i,total,d0,d1,d2,d3,d4\n0,1,1,0,0,0,0\n1,3,0,3,0,0,0\n"), "{csv}");
}

#[test]
fn exported_json_round_trips() {
    let ring = GradedRing::parse(&fs::read_to_string(data("ex47.ring")).unwrap(), Config::default()).unwrap();
    for complex in ["koszul", "resolution", "tower"] {
        let o = run(&["export-map", "--ring", &data("ex47.ring"), "--complex", complex, "--index", "2"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let m = from_json(&stdout(&o), &ring).unwrap();
        assert_eq!(m.source().rank(), if complex == "koszul" { 3 } else { 6 });
    }
}

#[test]
fn export_formats() {
    let ring = &data("ex45.ring");
    let o = run(&["export-map", "--ring", ring, "--complex", "koszul", "--index", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "row,col,target,source,entry\n0,0,-:-:-,-:-:1,x\n0,1,-:-:-,-:-:2,y\n0,2,-:-:-,-:-:3,z\n");
    let o = run(&["export-map", "--ring", ring, "--complex", "koszul", "--index", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zeta_json_and_homology() {
    let ring = &data("ex45.ring");
    let o = run(&["zeta", "--ring", ring, "--k", "0", "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[0]["map"]["entries"][0], serde_json::json!([0, 0, "x"]));
    let o = run(&["zeta", "--ring", ring, "--k", "1", "--homology-level"]);
    assert!(stdout(&o).contains("[ζ_1^1] 4x3 rank 3"), "{}", stdout(&o));
}

#[test]
fn user_cycles_override_extraction() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.txt");
    fs::write(&z, "# rescaled\nz 2*x, 0, 0\nz 0, y, z\n").unwrap();
    let o = run(&["cycles", "--ring", &data("ex45.ring"), "--z", path(&z)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("z1 (degree 2) = 2*x*e1"), "{}", stdout(&o));
    fs::write(&z, "z x, 0, 0\nz x, 0, 0\n").unwrap();
    let o = run(&["cycles", "--ring", &data("ex45.ring"), "--z", path(&z)]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn tower_and_divided_verify() {
    let ring = &data("ex47.ring");
    let o = run(&["tower", "--ring", ring, "--levels", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("M^0: ranks 1 3 3 1\n"));
    let o = run(&["divided", "--ring", ring, "--k", "1", "--compare-zeta"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[pass] μ_3^1 = ζ_3^1"));
}

#[test]
fn thread_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_koszulator"))
        .env("KOSZULATOR_THREADS", "1")
        .args(["resolve", "--ring", &data("ex45.ring"), "--imax", "3", "--betti"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_koszulator"))
        .env("KOSZULATOR_THREADS", "many")
        .args(["resolve", "--ring", &data("ex45.ring"), "--imax", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
