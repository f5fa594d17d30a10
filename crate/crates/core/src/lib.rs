//! Strict UVL feature-model toolkit without a standard library.
//!
//! This crate holds everything that works on bytes and text alone: decoding,
//! the indentation-sensitive lexer, the parser and canonical printer, the
//! diagnostic taxonomy, per-file analysis, corpus summaries, and the rule-based
//! fix engine. Filesystem traversal, report files and the command line live in
//! the `uvlfix` companion crate.
//!
//! The accepted dialect is deliberately small:
//!
//! ```text
//! features
//! 	Phone {abstract}
//! 		or
//! 			Camera
//! 			Audio
//! constraints
//! 	Camera => Audio
//! ```
//!
//! * a mandatory `features` header, then exactly one root feature;
//! * one tab per nesting level; features and group keywords alternate
//!   (`or`, `alternative`, `mandatory`, `optional`);
//! * feature names match `[A-Za-z_][A-Za-z0-9_]*`, optionally followed by
//!   `{abstract}`;
//! * an optional `constraints` block with one boolean expression per line over
//!   `!`, `&`, `|`, `=>` and `<=>` (tightest first), `=>` right-associative.
#![no_std]
#![allow(clippy::tabs_in_doc_comments)]

extern crate alloc;

pub mod analysis;
pub mod ast;
pub mod corrupt;
pub mod diagnostic;
pub mod fix;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod source;
pub mod summary;

pub use analysis::{analyze_file, FileAnalysis, FileRef, Status};
pub use ast::{Constraint, Feature, FeatureModel, Group, GroupKind};
pub use diagnostic::{classify_parse_failure, Category, Diagnostic, Severity};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_model;
pub use printer::serialize_model;
pub use source::{decode_bytes, SourceText};
pub use summary::{compare_summaries, render_summary, summarize, Comparison, Percent, Summary};

/// Returns true when `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_identifier_char)
}

pub(crate) fn is_identifier_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

#[cfg(test)]
mod tests {
    use super::is_identifier;

    #[test]
    fn identifier_grammar() {
        assert!(is_identifier("MOBILE_PHONE"));
        assert!(is_identifier("_5_MP"));
        assert!(!is_identifier("5MP"));
        assert!(!is_identifier("2.1MP"));
        assert!(!is_identifier("a b"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("Café"));
    }
}
