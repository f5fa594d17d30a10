use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use crate::diagnostic::{Category, Diagnostic, Severity};

const BOM: &[u8] = b"\xEF\xBB\xBF";

/// Decoded file contents with LF-only line separators and a line index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceText {
    pub raw_bytes: Vec<u8>,
    pub decoded: String,
    pub encoding_findings: Vec<Diagnostic>,
    /// Byte span of each line in `decoded`, excluding the `\n`.
    pub line_index: Vec<Range<usize>>,
    pub had_bom: bool,
    pub had_crlf: bool,
    /// True when the bytes were not UTF-8 and were read as Latin-1.
    pub latin1_fallback: bool,
}

impl SourceText {
    pub fn line_count(&self) -> usize {
        self.line_index.len()
    }

    /// Text of a 1-based line.
    pub fn line(&self, number: usize) -> Option<&str> {
        let span = self.line_index.get(number.checked_sub(1)?)?;
        Some(&self.decoded[span.clone()])
    }

    pub fn lines(&self) -> impl Iterator<Item = &str> + '_ {
        self.line_index
            .iter()
            .map(move |s| &self.decoded[s.clone()])
    }

    /// True when `line`/`column` address a character position (or the end of
    /// the line) inside this text.
    pub fn contains_position(&self, line: u32, column: Option<u32>) -> bool {
        let Some(text) = self.line(line as usize) else {
            return false;
        };
        match column {
            None => true,
            Some(c) => c >= 1 && (c as usize) <= text.chars().count() + 1,
        }
    }
}

/// Decodes raw file bytes. Never fails: invalid UTF-8 is read as Latin-1 and
/// the problem is recorded as an exception-severity `encoding` finding.
pub fn decode_bytes(raw: &[u8]) -> SourceText {
    let mut findings = Vec::new();
    let had_bom = raw.starts_with(BOM);
    let body = if had_bom {
        findings.push(
            Diagnostic::new(
                Severity::Warning,
                Category::Encoding,
                "byte-order mark at start of file",
                "\u{FEFF}",
            )
            .at(1, 1),
        );
        &raw[BOM.len()..]
    } else {
        raw
    };

    let (mut decoded, latin1_fallback) = match core::str::from_utf8(body) {
        Ok(s) => (String::from(s), false),
        Err(e) => {
            let pos = e.valid_up_to();
            let line_start = body[..pos]
                .iter()
                .rposition(|&b| b == b'\n')
                .map_or(0, |i| i + 1);
            let line = body[..pos].iter().filter(|&&b| b == b'\n').count() + 1;
            let column = pos - line_start + 1;
            let offending = char::from(body[pos]);
            findings.push(
                Diagnostic::new(
                    Severity::Exception,
                    Category::Encoding,
                    "invalid UTF-8; decoded as Latin-1",
                    String::from(offending),
                )
                .at(line as u32, column as u32),
            );
            (body.iter().map(|&b| char::from(b)).collect(), true)
        }
    };

    let had_crlf = decoded.contains("\r\n");
    if had_crlf {
        let first = decoded.find("\r\n").unwrap_or(0);
        let line = decoded[..first].matches('\n').count() + 1;
        decoded = decoded.replace("\r\n", "\n");
        findings.push(
            Diagnostic::new(
                Severity::Warning,
                Category::Encoding,
                "CRLF line endings",
                "\r\n",
            )
            .at_line(line as u32),
        );
    }

    let line_index = index_lines(&decoded);
    SourceText {
        raw_bytes: raw.to_vec(),
        decoded,
        encoding_findings: findings,
        line_index,
        had_bom,
        had_crlf,
        latin1_fallback,
    }
}

pub(crate) fn index_lines(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = 0;
    for (i, b) in text.bytes().enumerate() {
        if b == b'\n' {
            spans.push(start..i);
            start = i + 1;
        }
    }
    if start < text.len() {
        spans.push(start..text.len());
    }
    spans
}
