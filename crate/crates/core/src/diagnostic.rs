use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

/// How bad a finding is.
///
/// A warning still lets the model be built. An exception means no model could
/// be built. An error marks a fixable finding inside a file that already
/// failed because of an earlier exception.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Severity {
    Warning,
    Error,
    Exception,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
            Severity::Exception => "exception",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Category {
    ExtraneousInput,
    MismatchedInput,
    TokenRecognition,
    BlankLine,
    TabOnBlankLine,
    Indentation,
    Encoding,
    DuplicateFeature,
    UnknownReference,
    Io,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::ExtraneousInput,
        Category::MismatchedInput,
        Category::TokenRecognition,
        Category::BlankLine,
        Category::TabOnBlankLine,
        Category::Indentation,
        Category::Encoding,
        Category::DuplicateFeature,
        Category::UnknownReference,
        Category::Io,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::ExtraneousInput => "extraneous_input",
            Category::MismatchedInput => "mismatched_input",
            Category::TokenRecognition => "token_recognition",
            Category::BlankLine => "blank_line",
            Category::TabOnBlankLine => "tab_on_blank_line",
            Category::Indentation => "indentation",
            Category::Encoding => "encoding",
            Category::DuplicateFeature => "duplicate_feature",
            Category::UnknownReference => "unknown_reference",
            Category::Io => "io",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One finding in one file. Lines and columns are 1-based; columns count
/// characters, with a tab counting as one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagnostic {
    pub severity: Severity,
    pub category: Category,
    pub line: Option<u32>,
    pub column: Option<u32>,
    pub message: String,
    pub offending: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        category: Category,
        message: impl Into<String>,
        offending: impl Into<String>,
    ) -> Self {
        Self {
            severity,
            category,
            line: None,
            column: None,
            message: message.into(),
            offending: offending.into(),
        }
    }

    pub fn at(mut self, line: u32, column: u32) -> Self {
        self.line = Some(line);
        self.column = Some(column);
        self
    }

    pub fn at_line(mut self, line: u32) -> Self {
        self.line = Some(line);
        self
    }

    /// Ordering used for every diagnostic list: line, column, category name.
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.line
            .cmp(&other.line)
            .then(self.column.cmp(&other.column))
            .then(self.category.as_str().cmp(other.category.as_str()))
            .then(self.severity.cmp(&other.severity))
            .then(self.message.cmp(&other.message))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: ")?,
            (Some(l), None) => write!(f, "{l}: ")?,
            _ => {}
        }
        write!(f, "{} [{}]: {}", self.severity, self.category, self.message)
    }
}

pub(crate) fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(Diagnostic::sort_key_cmp);
}

/// Maps internal lexer categories onto the categories reported to users.
///
/// Interior blank lines surface as `mismatched_input`; everything else keeps
/// its category. Severity is never touched.
pub fn classify_parse_failure(mut d: Diagnostic) -> Diagnostic {
    if d.category == Category::BlankLine {
        d.category = Category::MismatchedInput;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(category: Category) -> Diagnostic {
        Diagnostic::new(Severity::Exception, category, "m", "").at(6, 1)
    }

    #[test]
    fn blank_line_becomes_mismatched_input() {
        let out = classify_parse_failure(diag(Category::BlankLine));
        assert_eq!(out.category, Category::MismatchedInput);
        assert_eq!(out.severity, Severity::Exception);
    }

    #[test]
    fn public_categories_pass_through() {
        for c in Category::ALL {
            if c == Category::BlankLine {
                continue;
            }
            assert_eq!(classify_parse_failure(diag(c)), diag(c));
        }
        let w = Diagnostic::new(Severity::Warning, Category::Encoding, "bom", "");
        assert_eq!(classify_parse_failure(w.clone()), w);
    }

    #[test]
    fn sort_order_is_line_column_category() {
        let mut v = alloc::vec![
            Diagnostic::new(Severity::Exception, Category::TokenRecognition, "", "").at(9, 4),
            Diagnostic::new(Severity::Exception, Category::ExtraneousInput, "", "").at(9, 4),
            Diagnostic::new(Severity::Warning, Category::Encoding, "", ""),
            Diagnostic::new(Severity::Exception, Category::BlankLine, "", "").at(6, 1),
        ];
        sort_diagnostics(&mut v);
        assert_eq!(v[0].line, None);
        assert_eq!(v[1].line, Some(6));
        assert_eq!(v[2].category, Category::ExtraneousInput);
        assert_eq!(v[3].category, Category::TokenRecognition);
    }
}
