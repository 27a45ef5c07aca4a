use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn toriclass(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toriclass"))
        .args(args)
        .env("TORICLASS_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn classgroup_of_gamma_is_z3() {
    let dir = tempfile::tempdir().unwrap();
    let o = toriclass(&["classgroup", "--graph-family", "gamma_5_3", "--kind", "stable"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), json!({"free_rank": 3, "torsion": []}));
}

#[test]
fn equivalence_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = toriclass(&["equiv", "--a", "family:edge:K_2,2", "--b", "family:order:Pi1:1,1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let w = stdout_json(&o);
    assert!(w["matrix"].is_array() && w["translation"].is_array());

    let o = toriclass(&["equiv", "family:edge:K_2,3", "family:order:Pi1:1,1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());

    let o = toriclass(&["equiv", "family:stable:gamma", "family:stable:gamma", "--budget", "1"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn input_errors_name_the_column() {
    let dir = tempfile::tempdir().unwrap();
    let o = toriclass(&["graph", "family:graph:K_2,x"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 18"));
    for args in [
        vec!["verify", "thm9.9"],
        vec!["verify", "thm4.6", "--max-vertices", "9"],
        vec!["polytope", "family:graph:C:5"],
        vec!["classgroup", "--poset-family", "Pi2:1,1", "--kind", "order"],
        vec!["poset", "/nonexistent.json"],
        vec!["frobnicate"],
    ] {
        assert_eq!(toriclass(&args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn emitted_documents_read_back() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, spec) in [
        ("poset", "family:poset:Pi3:1,1,1,1,0"),
        ("graph", "family:graph:H_5_2"),
        ("polytope", "family:edge:K_2,2,2"),
        ("polytope", "family:chain:X_pt"),
    ] {
        let first = toriclass(&[cmd, spec], dir.path());
        assert_eq!(first.status.code(), Some(0), "{spec}");
        let file = dir.path().join("doc.json");
        std::fs::write(&file, &first.stdout).unwrap();
        let again = toriclass(&[cmd, file.to_str().unwrap()], dir.path());
        assert_eq!(again.status.code(), Some(0));
        assert_eq!(first.stdout, again.stdout, "{spec}");
    }
    // census records name their polytope
    let o = toriclass(&["census", "--kind", "stable", "--max-n", "4", "--rank", "1"], dir.path());
    let records = stdout_json(&o);
    let first = &records.as_array().unwrap()[0];
    let file = dir.path().join("record.json");
    std::fs::write(&file, serde_json::to_vec(first).unwrap()).unwrap();
    let o = toriclass(&["classgroup", file.to_str().unwrap()], dir.path());
    assert_eq!(stdout_json(&o), json!({"free_rank": 1, "torsion": []}));
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, cache: &str| {
        let c = dir.path().join(cache);
        let args = ["verify", "thm4.6", "--max-vertices", "6", "--max-elements", "4", "--jobs", jobs];
        let v = toriclass(&args, &c);
        assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
        let census = toriclass(&["census", "--kind", "edge", "--max-n", "6", "--jobs", jobs], &c);
        assert_eq!(census.status.code(), Some(0));
        (v.stdout, census.stdout)
    };
    assert_eq!(run("1", "a"), run("3", "b"));
}

#[test]
fn census_uses_the_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("store");
    let args = ["census", "--kind", "order", "--max-n", "3", "--cache", cache.to_str().unwrap()];
    let first = toriclass(&args, dir.path());
    assert!(cache.join("order").join("3").is_dir());
    assert_eq!(toriclass(&args, dir.path()).stdout, first.stdout);
    let records = stdout_json(&first);
    assert_eq!(records.as_array().unwrap().len(), 1 + 2 + 5);
}

#[test]
fn verify_report_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = toriclass(&["verify", "snf_oracle", "--seed", "7", "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(r["theorem_id"], "snf_oracle");
    assert_eq!(r["bounds"]["seed"], 7);
    assert_eq!(r["counterexamples"], json!([]));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("PASS snf_oracle"));
}

#[test]
fn dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = toriclass(&["poset", "family:poset:X", "--format", "dot", "--hat"], dir.path());
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("digraph") && s.contains("bottom"));
    let o = toriclass(&["graph", "family:graph:K:2,2,2", "--format", "dot"], dir.path());
    assert_eq!(String::from_utf8(o.stdout).unwrap().matches("--").count(), 12);
    assert_eq!(toriclass(&["polytope", "family:order:X", "--format", "dot"], dir.path()).status.code(), Some(2));
}
