//! Analysis reports, summaries and change logs as text.

use serde::Serialize;
use uvlfix_core::fix::ChangeRecord;
use uvlfix_core::{Diagnostic, FileAnalysis, FileRef, Status, Summary};

pub const CSV_HEADER: [&str; 8] = [
    "dataset", "file", "status", "severity", "category", "line", "column", "message",
];

fn opt(n: Option<u32>) -> String {
    n.map(|n| n.to_string()).unwrap_or_default()
}

/// One CSV row per diagnostic; files without diagnostics get a single row
/// with the diagnostic columns left empty.
pub fn build_analysis_report(analyses: &[FileAnalysis]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for a in analyses {
        let dataset = a.file.dataset.as_str();
        let file = a.file.file_in_dataset();
        let status = a.status.as_str();
        if a.diagnostics.is_empty() {
            w.write_record([dataset, file, status, "", "", "", "", ""])
                .expect("in-memory write");
        }
        for d in &a.diagnostics {
            w.write_record([
                dataset,
                file,
                status,
                d.severity.as_str(),
                d.category.as_str(),
                &opt(d.line),
                &opt(d.column),
                &d.message,
            ])
            .expect("in-memory write");
        }
    }
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("all fields are UTF-8")
}

#[derive(Serialize)]
struct FileEntry<'a> {
    dataset: &'a str,
    file: &'a str,
    relative_path: &'a str,
    status: Status,
    diagnostics: &'a [Diagnostic],
}

#[derive(Serialize)]
struct Document<'a> {
    files: Vec<FileEntry<'a>>,
    summary: &'a Summary,
}

/// JSON with one object per file and one for the summary.
pub fn build_structured_report(analyses: &[FileAnalysis], summary: &Summary) -> String {
    let doc = Document {
        files: analyses
            .iter()
            .map(|a| FileEntry {
                dataset: &a.file.dataset,
                file: a.file.file_in_dataset(),
                relative_path: &a.file.relative_path,
                status: a.status,
                diagnostics: &a.diagnostics,
            })
            .collect(),
        summary,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_structured_summary(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

/// `relative_path:line:RULE: "before" -> "after"`, one change per line.
pub fn render_change_log<'a>(
    entries: impl IntoIterator<Item = (&'a FileRef, &'a [ChangeRecord])>,
) -> String {
    let mut out = String::new();
    for (file, changes) in entries {
        for c in changes {
            out.push_str(&format!("{}:{c}\n", file.relative_path));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use uvlfix_core::{analyze_file, summarize};

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(
            build_analysis_report(&[]),
            "dataset,file,status,severity,category,line,column,message\n"
        );
    }

    #[test]
    fn ok_file_row() {
        let a = analyze_file(FileRef::new("ds1", "ds1/a.uvl"), b"features\n\tA\n");
        let report = build_analysis_report(&[a]);
        assert_eq!(report.lines().nth(1), Some("ds1,a.uvl,ok,,,,,"));
    }

    #[test]
    fn messages_with_commas_are_quoted() {
        let a = analyze_file(
            FileRef::new("d", "d/x.uvl"),
            b"features\n\tA\n\t\toptional\n\t\t\tB,C\n",
        );
        let report = build_analysis_report(&[a]);
        let row = report.lines().nth(1).unwrap();
        assert!(row.ends_with('"'), "{row}");
    }

    #[test]
    fn structured_report_has_summary() {
        let a = analyze_file(FileRef::new("ds1", "ds1/a.uvl"), b"features\n\tA\n");
        let s = summarize(std::slice::from_ref(&a));
        let v: serde_json::Value =
            serde_json::from_str(&build_structured_report(&[a], &s)).unwrap();
        assert_eq!(v["files"][0]["status"], "ok");
        assert_eq!(v["summary"]["pct_ok"], "100.00");
    }
}
