mod common;

use uvlfix::report::{build_analysis_report, build_structured_report, render_change_log};
use uvlfix_core::fix::{builtin_rules, fix_file, FixOptions};
use uvlfix_core::{analyze_file, summarize, FileAnalysis, FileRef, Status};

use common::LISTING;

fn listing() -> FileAnalysis {
    analyze_file(
        FileRef::new("phones", "phones/mobile.uvl"),
        LISTING.as_bytes(),
    )
}

#[test]
fn listing_rows_match_its_diagnostics() {
    let a = listing();
    let report = build_analysis_report(std::slice::from_ref(&a));
    let rows: Vec<&str> = report.lines().skip(1).collect();
    assert_eq!(rows.len(), a.diagnostics.len());
    assert_eq!(
        rows[0],
        "phones,mobile.uvl,exception,exception,mismatched_input,6,1,blank line inside a block"
    );
    let categories: Vec<&str> = rows.iter().map(|r| r.split(',').nth(4).unwrap()).collect();
    assert_eq!(
        categories,
        [
            "mismatched_input",
            "extraneous_input",
            "token_recognition",
            "extraneous_input"
        ]
    );
}

#[test]
fn exception_files_in_csv_match_summary() {
    let tmp = tempfile::TempDir::new().unwrap();
    common::clean_corpus(tmp.path(), 10, 5);
    common::write(&tmp.path().join("ds9/bad.uvl"), LISTING.as_bytes());
    common::write(
        &tmp.path().join("ds9/bom.uvl"),
        b"\xEF\xBB\xBFfeatures\n\tA\n",
    );
    let (_, analyses) = uvlfix::scan_tree(tmp.path()).unwrap();
    let summary = summarize(&analyses);
    let report = build_analysis_report(&analyses);
    let failing: std::collections::BTreeSet<&str> = report
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(2) == Some("exception"))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(failing.len() as u64, summary.exceptions);
    assert_eq!(
        (summary.ok, summary.warnings, summary.exceptions),
        (10, 1, 1)
    );
    assert!(report.contains("ds9,bom.uvl,warning,warning,encoding,1,1,"));
}

#[test]
fn report_is_byte_stable() {
    let files = [
        listing(),
        analyze_file(FileRef::new("x", "x/a.uvl"), b"features\n\tA\n"),
    ];
    assert_eq!(build_analysis_report(&files), build_analysis_report(&files));
    let s = summarize(&files);
    assert_eq!(
        build_structured_report(&files, &s),
        build_structured_report(&files, &s)
    );
}

#[test]
fn structured_report_lists_every_file() {
    let files = [
        listing(),
        analyze_file(FileRef::new("x", "x/a.uvl"), b"features\n\tA\n"),
    ];
    let s = summarize(&files);
    let v: serde_json::Value = serde_json::from_str(&build_structured_report(&files, &s)).unwrap();
    assert_eq!(v["files"].as_array().unwrap().len(), 2);
    assert_eq!(
        v["files"][0]["diagnostics"][1]["category"],
        "extraneous_input"
    );
    assert_eq!(v["files"][0]["diagnostics"][1]["line"], 8);
    assert_eq!(v["summary"]["exceptions"], 1);
    assert_eq!(v["summary"]["pct_exceptions"], "50.00");
}

#[test]
fn change_log_lines_carry_paths() {
    let file = FileRef::new("phones", "phones/mobile.uvl");
    let fixed = fix_file(
        file.clone(),
        LISTING.as_bytes(),
        builtin_rules(),
        &FixOptions::default(),
    );
    assert_eq!(fixed.after.status, Status::Ok);
    let log = render_change_log([(&file, fixed.changes.as_slice())]);
    let lines: Vec<&str> = log.lines().collect();
    assert_eq!(
        lines[0],
        "phones/mobile.uvl:6:RULE-BLANK: \"\" -> (deleted)"
    );
    assert_eq!(
        lines[2],
        "phones/mobile.uvl:9:RULE-IDENT: \"\\t\\t\\t\\t\\t5 MP\" -> \"\\t\\t\\t\\t\\t_5_MP\""
    );
    assert_eq!(lines.len(), 4);
}
