mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

use common::{write, LISTING};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uvlfix"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn listing_corpus() -> TempDir {
    let tmp = TempDir::new().unwrap();
    write(
        &tmp.path().join("src/phones/mobile.uvl"),
        LISTING.as_bytes(),
    );
    write(&tmp.path().join("src/phones/ok.uvl"), b"features\n\tA\n");
    tmp
}

#[test]
fn clean_corpus_scan_exits_zero() {
    let tmp = TempDir::new().unwrap();
    common::clean_corpus(&tmp.path().join("src"), 5, 2);
    let out = run(tmp.path(), &["scan", "src"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("exceptions: 0 (0.00%)\n"));
    let csv = fs::read_to_string(tmp.path().join("analysis.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn listing_scan_exits_one() {
    let tmp = listing_corpus();
    let out = run(tmp.path(), &["scan", "src", "--summary", "out/summary.txt"]);
    assert_eq!(out.status.code(), Some(2), "out/ does not exist yet");
    fs::create_dir(tmp.path().join("out")).unwrap();
    let out = run(tmp.path(), &["scan", "src", "--summary", "out/summary.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty());
    let summary = fs::read_to_string(tmp.path().join("out/summary.txt")).unwrap();
    assert_eq!(
        summary,
        "total files: 2\nparsed ok: 1 (50.00%)\nwarnings: 0 (0.00%)\nexceptions: 1 (50.00%)\n"
    );
    assert!(tmp.path().join("out/analysis.csv").is_file());
}

#[test]
fn missing_root_exits_two() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(run(tmp.path(), &["scan", "nowhere"]).status.code(), Some(2));
    assert_eq!(
        run(tmp.path(), &["fix", "nowhere", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(tmp.path(), &["compare", "nowhere", "."]).status.code(),
        Some(2)
    );
    assert_eq!(run(tmp.path(), &["bogus"]).status.code(), Some(2));
}

#[test]
fn structured_format_writes_json() {
    let tmp = listing_corpus();
    let out = run(
        tmp.path(),
        &[
            "scan",
            "src",
            "--format",
            "structured",
            "--report",
            "r.json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["exceptions"], 1);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["files"][0]["file"], "mobile.uvl");
}

#[test]
fn fix_repairs_listing_and_writes_change_log() {
    let tmp = listing_corpus();
    let out = run(tmp.path(), &["fix", "src", "--out", "dst"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let log = fs::read_to_string(tmp.path().join("dst/changes.log")).unwrap();
    assert_eq!(log.lines().count(), 4);
    assert!(log.lines().all(|l| l.starts_with("phones/mobile.uvl:")));
    assert_eq!(
        fs::read(tmp.path().join("dst/phones/ok.uvl")).unwrap(),
        b"features\n\tA\n"
    );
    assert_eq!(run(tmp.path(), &["scan", "dst"]).status.code(), Some(0));
    assert!(stdout(&out).contains("fix rate: 100.00%\n"));

    let again = run(tmp.path(), &["fix", "src", "--out", "dst"]);
    assert_eq!(again.status.code(), Some(2));
    let forced = run(tmp.path(), &["fix", "src", "--out", "dst", "--force"]);
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn blank_rule_alone_keeps_bad_names() {
    let tmp = listing_corpus();
    let out = run(
        tmp.path(),
        &["fix", "src", "--out", "dst", "--rules", "RULE-BLANK"],
    );
    assert_eq!(out.status.code(), Some(1));
    let fixed = fs::read_to_string(tmp.path().join("dst/phones/mobile.uvl")).unwrap();
    assert!(fixed.contains("\t5 MP\n") && fixed.contains("2.1MP"));
    assert!(!fixed.contains("Camera_Resolution\n\n"));
}

#[test]
fn unknown_rule_is_a_usage_error() {
    let tmp = listing_corpus();
    let out = run(
        tmp.path(),
        &["fix", "src", "--out", "dst", "--rules", "RULE-NOPE"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("dst").exists());
}

#[test]
fn dry_run_writes_nothing() {
    let tmp = listing_corpus();
    let out = run(tmp.path(), &["fix", "src", "--out", "dst", "--dry-run"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!tmp.path().join("dst").exists());
    assert!(stdout(&out).starts_with("phones/mobile.uvl:6:RULE-BLANK: \"\" -> (deleted)\n"));
    let no_out = run(tmp.path(), &["fix", "src", "--dry-run"]);
    assert_eq!(no_out.status.code(), Some(0));
    assert_eq!(stdout(&no_out), stdout(&out));
}

#[test]
fn compare_prints_both_summaries() {
    let tmp = listing_corpus();
    run(tmp.path(), &["fix", "src", "--out", "dst"]);
    let out = run(tmp.path(), &["compare", "src", "dst"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("before:\ntotal files: 2\n"));
    assert!(text.ends_with("fixed: 1\nfix rate: 100.00%\n"));

    let same = stdout(&run(tmp.path(), &["compare", "src", "src"]));
    assert!(same.contains("fixed: 0\n"));
    let clean = stdout(&run(tmp.path(), &["compare", "dst", "dst"]));
    assert!(clean.ends_with("fix rate: n/a\n"));
}

#[test]
fn compare_rejects_corpora_of_different_size() {
    let tmp = listing_corpus();
    write(&tmp.path().join("other/a.uvl"), b"features\n\tA\n");
    assert_eq!(
        run(tmp.path(), &["compare", "src", "other"]).status.code(),
        Some(2)
    );
}

#[test]
fn console_output_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    common::clean_corpus(&tmp.path().join("src"), 30, 9);
    write(&tmp.path().join("src/ds1/bad.uvl"), LISTING.as_bytes());
    let a = run(tmp.path(), &["fix", "src", "--dry-run"]);
    let b = run(tmp.path(), &["fix", "src", "--dry-run"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}
