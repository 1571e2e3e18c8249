use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn charforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charforge"))
        .args(args)
        .env_remove("CHARFORGE_CACHE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn table_prints_cyclic_three() {
    let out = charforge(&["table", "cyclic(3)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("z(3)"), "{text}");
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with("χ")).count(), 3);
}

#[test]
fn table_json_has_characters() {
    let out = charforge(&["table", "symmetric(3)", "--format", "json", "--check"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.is_object());
}

#[test]
fn oversized_group_is_a_usage_error() {
    let out = charforge(&["table", "dihedral(999999)"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_spec_and_bad_flags_exit_two() {
    assert_eq!(code(&charforge(&["parse", "cyclic("])), 2);
    assert_eq!(code(&charforge(&["verify", "nonsense", "cyclic(3)"])), 2);
    assert_eq!(code(&charforge(&["table"])), 2);
    assert_eq!(code(&charforge(&["verify", "lemma22", "--p", "9"])), 2);
}

#[test]
fn parse_echoes_canonical_form() {
    let out = charforge(&["parse", " symmetric( 3 ) x cyclic(2) "]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("symmetric(3)"));
}

#[test]
fn verify_single_group_suites() {
    let out = charforge(&["verify", "lemma22", "--p", "7"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("pass"));

    let out = charforge(&["verify", "theoremB", "heisenberg(3)", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["suite"], "theoremB");
    assert!(v["instances"].as_array().unwrap().iter().all(|i| i["hypothesis"]["m"] == 3));

    let out = charforge(&["verify", "theoremB", "symmetric(3)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("skipped"));
}

#[test]
fn scan_isolates_broken_lines() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("catalog.txt");
    let report = dir.path().join("report.json");
    fs::write(&catalog, "# small\ncyclic(4)\nnot_a_group(3)\nquaternion(2)\n").unwrap();
    let out = charforge(&[
        "scan",
        catalog.to_str().unwrap(),
        "--suites",
        "theoremB,lemma21",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["version", "config", "verdicts", "summary", "timings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let verdicts = v["verdicts"].as_array().unwrap();
    assert!(verdicts.iter().any(|x| x["status"] == "error"));
    assert!(verdicts.iter().all(|x| x["status"] != "fail"));
    for x in verdicts {
        for key in ["suite", "spec", "status", "instances", "details"] {
            assert!(x.get(key).is_some(), "verdict missing {key}");
        }
    }
}

#[test]
fn scan_of_missing_catalog_exits_two() {
    let out = charforge(&["scan", "/nonexistent/catalog.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cache_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let catalog = dir.path().join("catalog.txt");
    fs::write(&catalog, "symmetric(3)\n").unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_charforge"))
            .args(["scan", catalog.to_str().unwrap(), "--suites", "theorem_tt"])
            .env("CHARFORGE_CACHE", &cache)
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(code(&first), 0);
    let entries: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);

    // A corrupted entry is replaced and the scan still succeeds.
    let path = entries[0].as_ref().unwrap().path();
    fs::write(&path, "garbage").unwrap();
    let second = run();
    assert_eq!(code(&second), 0);
    assert!(String::from_utf8_lossy(&second.stderr).contains("warning"));
    assert_ne!(fs::read_to_string(&path).unwrap(), "garbage");
}
