//! Writing the fixed mirror of a corpus and comparing the two trees.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use uvlfix_core::fix::{fix_file, ChangeRecord, FixOptions, FixRule, FixedFile};
use uvlfix_core::summary::TotalMismatch;
use uvlfix_core::{compare_summaries, summarize, Comparison, FileAnalysis, Summary};
use walkdir::WalkDir;

use crate::scan::{has_uvl_extension, relative_key, scan_tree, ScanError, ScanRecord};

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("source root {0} is not a directory")]
    SourceMissing(PathBuf),
    #[error("destination {0} is not empty (use --force to write into it)")]
    DestinationNotEmpty(PathBuf),
    #[error("destination {dst} lies inside source {src}")]
    DestinationInsideSource { src: PathBuf, dst: PathBuf },
    #[error("cannot prepare destination {path}: {source}")]
    Destination {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Emission {
    pub copied: Vec<String>,
    pub replaced: Vec<String>,
    pub failures: Vec<(String, String)>,
}

impl Emission {
    pub fn render(&self) -> String {
        let mut out = format!(
            "copied: {}\nreplaced: {}\nfailed: {}\n",
            self.copied.len(),
            self.replaced.len(),
            self.failures.len()
        );
        for path in &self.replaced {
            out.push_str(&format!("replaced {path}\n"));
        }
        for (path, why) in &self.failures {
            out.push_str(&format!("failed {path}: {why}\n"));
        }
        out
    }
}

/// Resolves symlinks and `..` in the longest existing prefix of `path`.
fn resolve(path: &Path) -> std::io::Result<PathBuf> {
    let abs = std::path::absolute(path)?;
    let mut existing = abs.as_path();
    let mut tail = Vec::new();
    while !existing.exists() {
        match (existing.parent(), existing.file_name()) {
            (Some(parent), Some(name)) => {
                tail.push(name.to_os_string());
                existing = parent;
            }
            _ => break,
        }
    }
    let mut out = existing.canonicalize()?;
    out.extend(tail.iter().rev());
    Ok(out)
}

fn is_empty_dir(path: &Path) -> std::io::Result<bool> {
    Ok(fs::read_dir(path)?.next().is_none())
}

enum Entry {
    Dir(String),
    File(String, PathBuf),
}

/// Copies `src` to `dst` byte for byte, substituting the `.uvl` files whose
/// relative paths appear in `fixes`. Symlinks are not copied.
pub fn mirror_dataset(
    src: &Path,
    dst: &Path,
    fixes: &BTreeMap<String, Vec<u8>>,
    force: bool,
) -> Result<Emission, EmitError> {
    if !src.is_dir() {
        return Err(EmitError::SourceMissing(src.to_path_buf()));
    }
    let dest_err = |source| EmitError::Destination {
        path: dst.to_path_buf(),
        source,
    };
    let src_real = resolve(src).map_err(dest_err)?;
    let dst_real = resolve(dst).map_err(dest_err)?;
    if dst_real.starts_with(&src_real) {
        return Err(EmitError::DestinationInsideSource {
            src: src.to_path_buf(),
            dst: dst.to_path_buf(),
        });
    }
    if dst.exists() && !force && !is_empty_dir(dst).map_err(dest_err)? {
        return Err(EmitError::DestinationNotEmpty(dst.to_path_buf()));
    }
    fs::create_dir_all(dst).map_err(dest_err)?;

    let mut emission = Emission::default();
    let mut entries = Vec::new();
    for entry in WalkDir::new(src).follow_links(false).min_depth(1) {
        match entry {
            Ok(e) => {
                let Some(key) = relative_key(src, e.path()) else {
                    continue;
                };
                if e.file_type().is_dir() {
                    entries.push(Entry::Dir(key));
                } else if e.file_type().is_file() {
                    entries.push(Entry::File(key, e.path().to_path_buf()));
                }
            }
            Err(err) => {
                let at = err
                    .path()
                    .and_then(|p| relative_key(src, p))
                    .unwrap_or_default();
                emission.failures.push((at, err.to_string()));
            }
        }
    }
    for e in &entries {
        if let Entry::Dir(key) = e {
            if let Err(err) = fs::create_dir_all(dst.join(key)) {
                emission.failures.push((key.clone(), err.to_string()));
            }
        }
    }
    let results: Vec<(String, Result<bool, String>)> = entries
        .par_iter()
        .filter_map(|e| match e {
            Entry::File(key, path) => Some((key, path)),
            Entry::Dir(_) => None,
        })
        .map(|(key, path)| {
            let target = dst.join(key);
            let fixed = fixes.get(key).filter(|_| has_uvl_extension(path));
            let result = match fixed {
                Some(bytes) => fs::write(&target, bytes).map(|_| true),
                None => fs::copy(path, &target).map(|_| false),
            };
            (key.clone(), result.map_err(|e| e.to_string()))
        })
        .collect();
    for (key, result) in results {
        match result {
            Ok(true) => emission.replaced.push(key),
            Ok(false) => emission.copied.push(key),
            Err(why) => emission.failures.push((key, why)),
        }
    }
    emission.copied.sort();
    emission.replaced.sort();
    emission.failures.sort();
    Ok(emission)
}

/// One file's fix result. `original` is `None` when the file was unreadable.
#[derive(Debug, Clone)]
pub struct FileFix {
    pub record: ScanRecord,
    pub original: Option<Vec<u8>>,
    pub fixed: FixedFile,
}

impl FileFix {
    pub fn is_changed(&self) -> bool {
        self.original
            .as_deref()
            .is_some_and(|o| self.fixed.is_changed(o))
    }

    pub fn changes(&self) -> &[ChangeRecord] {
        &self.fixed.changes
    }
}

/// Fixes every record in parallel; results keep record order.
pub fn fix_records(
    records: &[ScanRecord],
    rules: &[FixRule],
    options: &FixOptions,
) -> Vec<FileFix> {
    records
        .par_iter()
        .map(|r| match fs::read(&r.absolute_path) {
            Ok(raw) => FileFix {
                record: r.clone(),
                fixed: fix_file(r.file_ref(), &raw, rules, options),
                original: Some(raw),
            },
            Err(err) => {
                let a = FileAnalysis::unreadable(
                    r.file_ref(),
                    format!("cannot read {}: {err}", r.relative_path),
                );
                FileFix {
                    record: r.clone(),
                    original: None,
                    fixed: FixedFile {
                        bytes: Vec::new(),
                        before: a.clone(),
                        after: a,
                        changes: Vec::new(),
                        renames: Default::default(),
                    },
                }
            }
        })
        .collect()
}

/// Relative path to new bytes, for files the fixer actually changed.
pub fn changed_files(fixes: &[FileFix]) -> BTreeMap<String, Vec<u8>> {
    fixes
        .iter()
        .filter(|f| f.is_changed())
        .map(|f| (f.record.relative_path.clone(), f.fixed.bytes.clone()))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Mismatch(#[from] TotalMismatch),
}

/// Scans and summarizes both trees, then compares the summaries.
pub fn before_after(
    src: &Path,
    dst: &Path,
) -> Result<(Summary, Summary, Comparison), CompareError> {
    let (_, before) = scan_tree(src)?;
    let (_, after) = scan_tree(dst)?;
    let (before, after) = (summarize(&before), summarize(&after));
    let cmp = compare_summaries(&before, &after)?;
    Ok((before, after, cmp))
}
