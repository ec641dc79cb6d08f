use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lagrange-spectra"));
    cmd.args(args).env_remove("LAGRANGE_SPECTRA_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    cmd.output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    assert_eq!(run(&["bogus"], None).status.code(), Some(1));
    assert_eq!(run(&["prune", "--t", "not-a-number"], None).status.code(), Some(1));
    let out = run(&["--budget", "10", "prune", "--t", "3"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn markov_triples_csv() {
    let text = stdout(&run(&["--output", "csv", "markov-triples", "--count", "6"], None));
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().take(3).collect::<Vec<_>>(), ["x", "y", "z"]);
    let z: Vec<u64> = rows.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(z, vec![1, 2, 5, 13, 29, 34]);
}

#[test]
fn dcurve_is_nondecreasing() {
    let text = stdout(&run(
        &["--window", "2", "--output", "csv", "dcurve", "--grid", "2.9:3.5:0.1"],
        None,
    ));
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["t", "dLo", "dHi", "window", "r_max"]);
    let mut prev = 0.0;
    for r in rows.records() {
        let r = r.unwrap();
        let (lo, hi): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert!(lo <= hi && hi >= prev);
        prev = hi;
    }
}

#[test]
fn dim_methods_agree() {
    let text = stdout(&run(
        &["--window", "3", "--rmax", "22", "dim", "--alphabet", "1,2", "--method", "both"],
        None,
    ));
    let v: Value = serde_json::from_str(&text).unwrap();
    let est = v["estimates"].as_array().unwrap();
    assert_eq!(est.len(), 2);
    let (p, b) = (&est[0], &est[1]);
    assert_eq!(p["method"], "pressure");
    assert_eq!(b["method"], "boxcount");
    assert!(num(&p["lo"]) <= 0.5313 && 0.5312 <= num(&p["hi"]));
    assert!(num(&b["lo"]) <= num(&p["hi"]) && num(&p["lo"]) <= num(&b["hi"]));
}

#[test]
fn corrupted_cache_entries_are_repaired() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--N", "3", "--window", "2", "prune", "--t", "3.1"];
    let cold = stdout(&run(&args, Some(dir.path())));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    std::fs::write(&entries[0], "{\"truncated\": ").unwrap();
    let out = run(&args, Some(dir.path()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupted"));
    assert_eq!(stdout(&out), cold);
    let warm = run(&args, Some(dir.path()));
    assert!(warm.stderr.is_empty());
    assert_eq!(stdout(&warm), cold);
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sumset.json");
    let out = run(
        &["--out", path.to_str().unwrap(), "sumset", "--alphabet", "1", "--depth", "6"],
        None,
    );
    assert!(stdout(&out).is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.is_object());
}
