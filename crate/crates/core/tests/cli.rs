//! The `subshift` binary: subcommands, exit codes and reproducible bundles.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subshift")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn list_shows_every_tag() {
    let o = run(&["list"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for tag in ["T1.1", "T1.2", "T2.1", "T2.2", "T2.3", "T2.5", "T4.1", "T4.2", "L3.1", "P3.8", "§5-staircase", "T1.4-extract"] {
        assert!(s.lines().any(|l| l.starts_with(&format!("{tag}\t"))), "{tag} missing");
    }
    let j: serde_json::Value = serde_json::from_slice(&run(&["--format", "json", "list"]).stdout).unwrap();
    assert_eq!(j["experiments"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&run(&["verify", "T2.1"])), 0);
    // the i2 formulas do not hold for this construction
    assert_eq!(code(&run(&["verify", "T4.1-i2", "N=5"])), 1);
    // a cap far below the needed window leaves the criterion undecided
    let o = run(&["--cap", "64", "verify", "T2.1"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("inconclusive"));
    // bad input is an error, reported as inconclusive
    assert_eq!(code(&run(&["verify", "T9.9"])), 2);
}

#[test]
fn verify_bundles_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["--out-dir", d.path().to_str().unwrap(), "verify", "staircase"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let (da, db) = (a.path().join("S5-staircase"), b.path().join("S5-staircase"));
    let files = read_dir_sorted(&da);
    assert!(files.iter().any(|(n, _)| n == "provenance.json"));
    assert!(files.iter().any(|(n, _)| n == "verdicts.json"));
    assert!(files.iter().any(|(n, _)| n.ends_with(".tsv")));
    assert_eq!(files, read_dir_sorted(&db));

    let prov: serde_json::Value = serde_json::from_slice(&fs::read(da.join("provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["params"]["n"], "1000000");
    assert_eq!(prov["version"], env!("CARGO_PKG_VERSION"));

    let j = tempfile::tempdir().unwrap();
    run(&["--out-dir", j.path().to_str().unwrap(), "--format", "json", "verify", "T2.1", "n_max=50"]);
    assert!(j.path().join("T2.1").join("sturmian.complexity.json").exists());
}

#[test]
fn gen_map_analyze_measure_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();

    let o = run(&["--out-dir", d, "gen", "stitched", "j=2", "i=1", "--length", "4000", "--origin", "-2000", "--out", "x.seq"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let side: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("x.seq.provenance.json")).unwrap()).unwrap();
    assert_eq!(side["family"], "stitched");
    assert!(side["provenance"]["params"]["schedule"].is_object() || side["provenance"]["params"]["schedule"].is_array());

    let o = run(&["--out-dir", d, "map", "pi", "--in", &format!("{d}/x.seq"), "--languages", "stitched j=2 i=1", "--out", "y.seq"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let y = fs::read_to_string(dir.path().join("y.seq")).unwrap();
    assert!(y.starts_with("#alphabet:"));

    let o = run(&["--out-dir", d, "analyze", "--family", "sturmian", "--nmax", "40", "--report", "bounds", "--bound", "1,const:1,ceiling", "--out", "s.tsv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let tsv = fs::read_to_string(dir.path().join("s.tsv")).unwrap();
    assert!(tsv.starts_with("n\tc\trs\tls\tmargin"));
    assert!(tsv.lines().nth(40).unwrap().starts_with("40\t41\t1\t1\t0"));
    assert!(dir.path().join("s.tsv.verdict.json").exists());

    // c(n) = n + 1 breaks a ceiling of n
    let o = run(&["analyze", "--family", "sturmian", "--nmax", "20", "--report", "bounds", "--bound", "1,zero,ceiling"]);
    assert_eq!(code(&o), 1);

    let o = run(&["measure", "--family", "staircase", "--lengths", "100000,1000000", "--depth", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["measure", "extract", "--family", "staircase", "--g", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(j["report"].is_object());
}

#[test]
fn custom_rule_map() {
    let dir = tempfile::tempdir().unwrap();
    let rule = dir.path().join("xor.tsv");
    fs::write(&rule, "#memory: 0\n00\t0\n01\t1\n10\t1\n11\t0\n").unwrap();
    let seq = dir.path().join("p.seq");
    fs::write(&seq, "#alphabet: 0 1\n0011001100\n").unwrap();
    let o = run(&["map", "custom", "--rule", rule.to_str().unwrap(), "--in", seq.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().last().unwrap(), "010101010");
}
