use std::fs;
use std::process::Command;

use ccr_core::sweep::{read_records, Outcome};

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ccr-lab"))
}

#[test]
fn spin_sweep_writes_twelve_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spin.cfg");
    let out = dir.path().join("spin.csv");
    fs::write(&cfg, "# spin battery\nspin.p = 10, 100, 1000\nspin.k = 0..3\n").unwrap();
    let status = lab()
        .args(["run", "--experiment", "spin", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("experiment,params,defect,measured,bound,pass\n"));
    let records = read_records(&text).unwrap();
    assert_eq!(records.len(), 12);
    assert!(records.iter().all(|r| r.outcome == Outcome::Pass && r.defect == "thm3.1"));

    let rep = lab().args(["report", "--in"]).arg(&out).output().unwrap();
    assert_eq!(rep.status.code(), Some(0));
    let rep = String::from_utf8(rep.stdout).unwrap();
    for k in 1..=3 {
        assert!(rep.contains(&format!("slope thm3.1 [k={k}] vs p: -1.000")), "{rep}");
    }
    assert!(rep.contains("note: rotation covariance"));
}

#[test]
fn empty_list_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    let out = dir.path().join("bad.csv");
    fs::write(&cfg, "spin.p =\n").unwrap();
    let status = lab()
        .args(["run", "--experiment", "spin", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(lab().args(["run", "--experiment", "nope"]).status().unwrap().code(), Some(2));
    assert_eq!(lab().args(["frobnicate"]).status().unwrap().code(), Some(2));
}

#[test]
fn resource_refusal_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("big.cfg");
    fs::write(&cfg, "parafermi.p = 12\nparafermi.nu = 2\n").unwrap();
    let out = lab()
        .args(["run", "--experiment", "parafermi", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let records = read_records(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(records[0].outcome.is_resource_skip());
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    fs::write(&cfg, "weyl.nu = 64, 256\nparafermi.p = 1, 2\nparafermi.nu = 2\nclifford.nu = 1..3\n").unwrap();
    let run = |format: &str| {
        let out = lab()
            .args(["run", "--experiment", "all", "--seed", "7", "--format", format, "--config"])
            .arg(&cfg)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run("csv"), run("csv"));
    let json = run("json");
    assert_eq!(json, run("json"));
    let csv = read_records(std::str::from_utf8(&run("csv")).unwrap()).unwrap();
    assert_eq!(read_records(std::str::from_utf8(&json).unwrap()).unwrap(), csv);
}

#[test]
fn single_record_slope_is_na() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    fs::write(
        &path,
        "experiment,params,defect,measured,bound,pass\nweyl,nu=1024;mu=32;l=0,thm2.4-group,1.5e-1,,true\n",
    )
    .unwrap();
    let out = lab().args(["report", "--in"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("vs nu: n/a"));
}
