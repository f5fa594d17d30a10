use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::FeatureModel;
use crate::diagnostic::{classify_parse_failure, sort_diagnostics, Category, Diagnostic, Severity};
use crate::parser::parse_model;
use crate::source::{decode_bytes, SourceText};

/// Identity of a file inside a corpus: its dataset and its `/`-separated path
/// relative to the corpus root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FileRef {
    pub dataset: String,
    pub relative_path: String,
}

impl FileRef {
    pub fn new(dataset: impl Into<String>, relative_path: impl Into<String>) -> Self {
        Self {
            dataset: dataset.into(),
            relative_path: relative_path.into(),
        }
    }

    /// Path inside the dataset directory. For files directly under the corpus
    /// root this is the whole relative path.
    pub fn file_in_dataset(&self) -> &str {
        match self.relative_path.split_once('/') {
            Some((first, rest)) if first == self.dataset => rest,
            _ => &self.relative_path,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Status {
    Ok,
    Warning,
    Exception,
}

impl Status {
    pub fn from_diagnostics(diags: &[Diagnostic]) -> Self {
        if diags.iter().any(|d| d.severity == Severity::Exception) {
            Status::Exception
        } else if diags.is_empty() {
            Status::Ok
        } else {
            Status::Warning
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Warning => "warning",
            Status::Exception => "exception",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of checking one file.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FileAnalysis {
    pub file: FileRef,
    pub status: Status,
    pub diagnostics: Vec<Diagnostic>,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub model: Option<FeatureModel>,
}

impl FileAnalysis {
    /// An analysis for a file that could not be read at all.
    pub fn unreadable(file: FileRef, message: impl Into<String>) -> Self {
        let diag = Diagnostic::new(Severity::Exception, Category::Io, message, "");
        Self {
            file,
            status: Status::Exception,
            diagnostics: vec![diag],
            model: None,
        }
    }

    pub fn has_category(&self, category: Category) -> bool {
        self.diagnostics.iter().any(|d| d.category == category)
    }
}

/// Decodes, parses and classifies one file.
pub fn analyze_file(file: FileRef, raw: &[u8]) -> FileAnalysis {
    analyze_source(file, &decode_bytes(raw))
}

pub fn analyze_source(file: FileRef, src: &SourceText) -> FileAnalysis {
    let (model, diags) = parse_model(src);
    let mut diagnostics: Vec<Diagnostic> = diags.into_iter().map(classify_parse_failure).collect();
    sort_diagnostics(&mut diagnostics);
    FileAnalysis {
        status: Status::from_diagnostics(&diagnostics),
        file,
        diagnostics,
        model,
    }
}
