use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use uvlfix::report::{
    build_analysis_report, build_structured_report, render_change_log, render_structured_summary,
};
use uvlfix::{before_after, changed_files, fix_records, mirror_dataset, scan_tree, Scan};
use uvlfix_core::fix::{builtin_rules, FixOptions, RuleId};
use uvlfix_core::{compare_summaries, render_summary, summarize, FileAnalysis, Summary};

/// Lint and fix corpora of UVL feature models.
#[derive(Parser)]
#[command(name = "uvlfix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every .uvl file under ROOT and write a report and summary.
    Scan {
        root: PathBuf,
        /// Report file [default: analysis.csv (or .json) beside the summary]
        #[arg(long)]
        report: Option<PathBuf>,
        /// Summary file [default: standard output]
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Fix ROOT into a mirror at --out and write changes.log there.
    Fix {
        root: PathBuf,
        #[arg(long, required_unless_present = "dry_run")]
        out: Option<PathBuf>,
        /// Comma-separated rule ids, e.g. RULE-BLANK,RULE-IDENT [default: all]
        #[arg(long, value_delimiter = ',')]
        rules: Vec<RuleId>,
        /// Print the change log without writing anything.
        #[arg(long)]
        dry_run: bool,
        /// Write into a non-empty destination.
        #[arg(long)]
        force: bool,
        /// Spaces per indentation level when converting to tabs.
        #[arg(long, default_value_t = 4)]
        indent_width: usize,
    },
    /// Compare the summaries of two corpora, typically original and fixed.
    Compare { before: PathBuf, after: PathBuf },
}

fn exit_for(summary: &Summary) -> ExitCode {
    if summary.exceptions > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn report_problems(scan: &Scan) {
    for p in &scan.problems {
        eprintln!("uvlfix: {}", p.message);
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_scan(
    root: &Path,
    report: Option<PathBuf>,
    summary_path: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode> {
    let (scan, analyses) = scan_tree(root)?;
    report_problems(&scan);
    let summary = summarize(&analyses);
    let (report_text, summary_text, default_name) = match format {
        Format::Csv => (
            build_analysis_report(&analyses),
            render_summary(&summary),
            "analysis.csv",
        ),
        Format::Structured => (
            build_structured_report(&analyses, &summary),
            render_structured_summary(&summary),
            "analysis.json",
        ),
    };
    let report = report.unwrap_or_else(|| {
        let dir = summary_path
            .as_deref()
            .and_then(Path::parent)
            .map(Path::to_path_buf)
            .unwrap_or_default();
        dir.join(default_name)
    });
    write_file(&report, &report_text)?;
    match &summary_path {
        Some(p) => write_file(p, &summary_text)?,
        None => print!("{summary_text}"),
    }
    if !scan.problems.is_empty() {
        return Ok(ExitCode::from(2));
    }
    Ok(exit_for(&summary))
}

fn cmd_fix(
    root: &Path,
    out: Option<PathBuf>,
    rules: Vec<RuleId>,
    dry_run: bool,
    force: bool,
    width: usize,
) -> Result<ExitCode> {
    if width == 0 {
        bail!("--indent-width must be at least 1");
    }
    let mut options = if rules.is_empty() {
        FixOptions::default()
    } else {
        FixOptions::only(rules)
    };
    options.indent_width = width;
    let scan = uvlfix::discover(root)?;
    report_problems(&scan);
    let fixes = fix_records(&scan.records, builtin_rules(), &options);
    let log = render_change_log(fixes.iter().map(|f| (&f.fixed.before.file, f.changes())));
    let before: Vec<FileAnalysis> = fixes.iter().map(|f| f.fixed.before.clone()).collect();
    let after: Vec<FileAnalysis> = fixes.iter().map(|f| f.fixed.after.clone()).collect();
    let (before, after) = (summarize(&before), summarize(&after));
    let comparison = compare_summaries(&before, &after)?;

    if dry_run {
        print!("{log}");
    } else {
        let out = out.context("--out is required unless --dry-run is given")?;
        let emission = mirror_dataset(root, &out, &changed_files(&fixes), force)?;
        write_file(&out.join("changes.log"), &log)?;
        print!("{}", emission.render());
        if !emission.failures.is_empty() {
            return Ok(ExitCode::from(2));
        }
    }
    print!(
        "before:\n{}after:\n{}{}",
        render_summary(&before),
        render_summary(&after),
        comparison.render()
    );
    if !scan.problems.is_empty() {
        return Ok(ExitCode::from(2));
    }
    Ok(exit_for(&after))
}

fn cmd_compare(before: &Path, after: &Path) -> Result<ExitCode> {
    let (b, a, cmp) = before_after(before, after)?;
    print!(
        "before:\n{}after:\n{}{}",
        render_summary(&b),
        render_summary(&a),
        cmp.render()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan {
            root,
            report,
            summary,
            format,
        } => cmd_scan(&root, report, summary, format),
        Command::Fix {
            root,
            out,
            rules,
            dry_run,
            force,
            indent_width,
        } => cmd_fix(&root, out, rules, dry_run, force, indent_width),
        Command::Compare { before, after } => cmd_compare(&before, &after),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("uvlfix: {err:#}");
            ExitCode::from(2)
        }
    }
}
