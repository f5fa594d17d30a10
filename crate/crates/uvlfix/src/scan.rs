//! Discovery of `.uvl` files under a corpus root.

use std::path::{Component, Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use uvlfix_core::{analyze_file, Category, Diagnostic, FileAnalysis, FileRef, Severity};
use walkdir::WalkDir;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub dataset: String,
    /// `/`-separated, relative to the scanned root.
    pub relative_path: String,
    pub absolute_path: PathBuf,
}

impl ScanRecord {
    pub fn file_ref(&self) -> FileRef {
        FileRef::new(self.dataset.clone(), self.relative_path.clone())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("dataset root {0} does not exist")]
    MissingRoot(PathBuf),
    #[error("dataset root {0} is not a directory")]
    NotADirectory(PathBuf),
}

/// Files found under a root, plus directories that could not be read.
#[derive(Debug, Clone, Default)]
pub struct Scan {
    pub records: Vec<ScanRecord>,
    pub problems: Vec<Diagnostic>,
}

pub fn has_uvl_extension(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("uvl"))
}

/// Joins the components of `path` below `root` with `/`.
pub(crate) fn relative_key(root: &Path, path: &Path) -> Option<String> {
    let rel = path.strip_prefix(root).ok()?;
    let parts: Vec<String> = rel
        .components()
        .filter_map(|c| match c {
            Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect();
    (!parts.is_empty()).then(|| parts.join("/"))
}

fn root_name(root: &Path) -> String {
    let named = root.file_name().map(|n| n.to_string_lossy().into_owned());
    named
        .or_else(|| {
            root.canonicalize()
                .ok()
                .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        })
        .unwrap_or_else(|| String::from("."))
}

/// Walks `root` depth-first without following symlinks and returns every
/// `.uvl` file, sorted by relative path.
pub fn discover(root: &Path) -> Result<Scan, ScanError> {
    if !root.exists() {
        return Err(ScanError::MissingRoot(root.to_path_buf()));
    }
    if !root.is_dir() {
        return Err(ScanError::NotADirectory(root.to_path_buf()));
    }
    let base = root_name(root);
    let mut scan = Scan::default();
    for entry in WalkDir::new(root).follow_links(false).min_depth(1) {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                let at = err
                    .path()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| root.display().to_string());
                scan.problems.push(Diagnostic::new(
                    Severity::Exception,
                    Category::Io,
                    format!("cannot read {at}: {err}"),
                    at,
                ));
                continue;
            }
        };
        if !entry.file_type().is_file() || !has_uvl_extension(entry.path()) {
            continue;
        }
        let Some(relative_path) = relative_key(root, entry.path()) else {
            continue;
        };
        let dataset = match relative_path.split_once('/') {
            Some((first, _)) => first.to_string(),
            None => base.clone(),
        };
        let absolute_path =
            std::path::absolute(entry.path()).unwrap_or_else(|_| entry.path().to_path_buf());
        scan.records.push(ScanRecord {
            dataset,
            relative_path,
            absolute_path,
        });
    }
    scan.records
        .sort_by(|a, b| a.relative_path.as_bytes().cmp(b.relative_path.as_bytes()));
    Ok(scan)
}

/// Reads and analyzes every record in parallel; results keep record order.
pub fn analyze_records(records: &[ScanRecord]) -> Vec<FileAnalysis> {
    records
        .par_iter()
        .map(|r| match std::fs::read(&r.absolute_path) {
            Ok(raw) => analyze_file(r.file_ref(), &raw),
            Err(err) => FileAnalysis::unreadable(
                r.file_ref(),
                format!("cannot read {}: {err}", r.relative_path),
            ),
        })
        .collect()
}

/// [`discover`] followed by [`analyze_records`].
pub fn scan_tree(root: &Path) -> Result<(Scan, Vec<FileAnalysis>), ScanError> {
    let scan = discover(root)?;
    let analyses = analyze_records(&scan.records);
    Ok((scan, analyses))
}
