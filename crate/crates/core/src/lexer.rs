//! Indentation-sensitive lexer.
//!
//! Lexing is line oriented. Which tokens a line may contain depends on the
//! block it sits in: top-level keywords at depth 0, feature and group lines
//! inside `features`, boolean expressions inside `constraints`. Every problem
//! is reported as a diagnostic; the lexer never stops early.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ast::GroupKind;
use crate::diagnostic::{Category, Diagnostic, Severity};
use crate::is_identifier_char;
use crate::source::SourceText;

/// Spaces per nesting level assumed when recovering from space indentation.
pub(crate) const RECOVERY_INDENT_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    KwFeatures,
    KwConstraints,
    Indent,
    Dedent,
    /// A name as written, which may violate the identifier grammar.
    Ident(String),
    Group(GroupKind),
    LBrace,
    RBrace,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    /// Top-level text that is neither `features` nor `constraints`.
    Unexpected(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub column: u32,
}

/// A diagnostic plus whether a builtin fix rule could repair it.
#[derive(Debug, Clone)]
pub(crate) struct Finding {
    pub diag: Diagnostic,
    pub fixable: bool,
}

impl Finding {
    pub(crate) fn blocking(
        category: Category,
        fixable: bool,
        line: u32,
        column: u32,
        message: impl Into<String>,
        offending: impl Into<String>,
    ) -> Self {
        Self {
            diag: Diagnostic::new(Severity::Exception, category, message, offending)
                .at(line, column),
            fixable,
        }
    }
}

pub(crate) struct Lexed {
    pub tokens: Vec<Token>,
    pub findings: Vec<Finding>,
}

/// Shape of one physical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LineShape<'a> {
    Empty,
    WhitespaceOnly,
    Content(Leading, &'a str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Leading {
    pub tabs: usize,
    pub spaces: usize,
}

impl Leading {
    pub fn len(self) -> usize {
        self.tabs + self.spaces
    }

    pub fn depth(self) -> usize {
        self.tabs + self.spaces.div_ceil(RECOVERY_INDENT_WIDTH)
    }
}

pub(crate) fn line_shape(line: &str) -> LineShape<'_> {
    if line.is_empty() {
        return LineShape::Empty;
    }
    let lead_len = line.len() - line.trim_start_matches([' ', '\t']).len();
    let rest = &line[lead_len..];
    if rest.is_empty() {
        return LineShape::WhitespaceOnly;
    }
    let lead = &line[..lead_len];
    let tabs = lead.bytes().filter(|&b| b == b'\t').count();
    LineShape::Content(
        Leading {
            tabs,
            spaces: lead_len - tabs,
        },
        rest,
    )
}

/// For each line, whether a blank or whitespace-only line there sits inside a
/// block: the next content line is indented. Blank lines before a top-level
/// keyword or at end of file are tolerated.
pub(crate) fn interior_blank_mask(shapes: &[LineShape<'_>]) -> Vec<bool> {
    let mut mask = alloc::vec![false; shapes.len()];
    let mut next_indented = false;
    for (i, shape) in shapes.iter().enumerate().rev() {
        match shape {
            LineShape::Content(lead, _) => next_indented = lead.len() > 0,
            _ => mask[i] = next_indented,
        }
    }
    mask
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Start,
    Features,
    Constraints,
}

/// Tokenizes decoded source. Indentation becomes `Indent`/`Dedent` tokens; all
/// problems come back as diagnostics in source order.
pub fn tokenize(src: &SourceText) -> (Vec<Token>, Vec<Diagnostic>) {
    let lexed = lex(src);
    let mut diags: Vec<Diagnostic> = lexed.findings.into_iter().map(|f| f.diag).collect();
    crate::diagnostic::sort_diagnostics(&mut diags);
    (lexed.tokens, diags)
}

pub(crate) fn lex(src: &SourceText) -> Lexed {
    let lines: Vec<&str> = src.lines().collect();
    let shapes: Vec<LineShape<'_>> = lines.iter().map(|l| line_shape(l)).collect();
    let interior = interior_blank_mask(&shapes);

    let mut tokens = Vec::new();
    let mut findings = Vec::new();
    let mut block = Block::Start;
    let mut depth = 0usize;
    let mut last_line = 1u32;

    for (idx, shape) in shapes.iter().enumerate() {
        let n = (idx + 1) as u32;
        match *shape {
            LineShape::Empty => {
                if interior[idx] {
                    findings.push(Finding::blocking(
                        Category::BlankLine,
                        true,
                        n,
                        1,
                        "blank line inside a block",
                        "",
                    ));
                }
            }
            LineShape::WhitespaceOnly => {
                if interior[idx] {
                    findings.push(Finding::blocking(
                        Category::TabOnBlankLine,
                        true,
                        n,
                        1,
                        "line holds only tabs or spaces",
                        lines[idx],
                    ));
                }
            }
            LineShape::Content(lead, content) => {
                last_line = n;
                if lead.spaces > 0 {
                    findings.push(Finding::blocking(
                        Category::Indentation,
                        lead.spaces % RECOVERY_INDENT_WIDTH == 0,
                        n,
                        1,
                        "indentation must use tabs",
                        &lines[idx][..lead.len()],
                    ));
                }
                let new_depth = lead.depth();
                if new_depth > depth + 1 {
                    findings.push(Finding::blocking(
                        Category::Indentation,
                        false,
                        n,
                        1,
                        format!("indentation jumps {} levels", new_depth - depth),
                        &lines[idx][..lead.len()],
                    ));
                }
                while depth < new_depth {
                    tokens.push(Token {
                        kind: TokenKind::Indent,
                        line: n,
                        column: 1,
                    });
                    depth += 1;
                }
                while depth > new_depth {
                    tokens.push(Token {
                        kind: TokenKind::Dedent,
                        line: n,
                        column: 1,
                    });
                    depth -= 1;
                }

                let content = content.trim_end();
                let col = (lead.len() + 1) as u32;

                if block == Block::Start && !(new_depth == 0 && content == "features") {
                    findings.push(Finding::blocking(
                        Category::MismatchedInput,
                        false,
                        n,
                        col,
                        "missing `features` header",
                        content,
                    ));
                    block = Block::Features;
                    if new_depth == 0 && content != "constraints" {
                        tokens.push(Token {
                            kind: TokenKind::Unexpected(content.to_string()),
                            line: n,
                            column: col,
                        });
                        continue;
                    }
                }

                if new_depth == 0 {
                    lex_top_level(content, n, col, &mut block, &mut tokens, &mut findings);
                } else if block == Block::Constraints {
                    lex_constraint(content, n, col, &mut tokens, &mut findings);
                } else if let Some(kind) = GroupKind::from_keyword(content) {
                    tokens.push(Token {
                        kind: TokenKind::Group(kind),
                        line: n,
                        column: col,
                    });
                } else {
                    lex_feature(content, n, col, &mut tokens, &mut findings);
                }
            }
        }
    }

    if shapes.iter().all(|s| !matches!(s, LineShape::Content(..))) {
        findings.push(Finding {
            diag: Diagnostic::new(
                Severity::Exception,
                Category::MismatchedInput,
                "missing `features` header",
                "",
            ),
            fixable: false,
        });
    }
    while depth > 0 {
        tokens.push(Token {
            kind: TokenKind::Dedent,
            line: last_line,
            column: 1,
        });
        depth -= 1;
    }
    Lexed { tokens, findings }
}

fn lex_top_level(
    content: &str,
    n: u32,
    col: u32,
    block: &mut Block,
    tokens: &mut Vec<Token>,
    findings: &mut Vec<Finding>,
) {
    match content {
        "features" => {
            if *block != Block::Start {
                findings.push(Finding::blocking(
                    Category::MismatchedInput,
                    false,
                    n,
                    col,
                    "`features` block appears twice",
                    content,
                ));
            }
            *block = Block::Features;
            tokens.push(Token {
                kind: TokenKind::KwFeatures,
                line: n,
                column: col,
            });
        }
        "constraints" => {
            if *block == Block::Constraints {
                findings.push(Finding::blocking(
                    Category::MismatchedInput,
                    false,
                    n,
                    col,
                    "`constraints` block appears twice",
                    content,
                ));
            }
            *block = Block::Constraints;
            tokens.push(Token {
                kind: TokenKind::KwConstraints,
                line: n,
                column: col,
            });
        }
        other => {
            findings.push(Finding::blocking(
                Category::MismatchedInput,
                false,
                n,
                col,
                "expected `features` or `constraints`",
                other,
            ));
            tokens.push(Token {
                kind: TokenKind::Unexpected(other.to_string()),
                line: n,
                column: col,
            });
        }
    }
}

/// Checks a name against the identifier grammar and reports the most
/// specific problem: an illegal character first, then a leading digit, then
/// interior whitespace.
pub(crate) fn check_name(name: &str, n: u32, col: u32) -> Option<Finding> {
    let illegal = name
        .chars()
        .enumerate()
        .find(|&(_, c)| !is_identifier_char(c) && !c.is_whitespace());
    if let Some((i, c)) = illegal {
        return Some(Finding::blocking(
            Category::ExtraneousInput,
            true,
            n,
            col + i as u32,
            format!("extraneous input '{c}' in name '{name}'"),
            name,
        ));
    }
    if name.starts_with(|c: char| c.is_ascii_digit()) {
        return Some(Finding::blocking(
            Category::TokenRecognition,
            true,
            n,
            col,
            format!("token recognition error: name '{name}' starts with a digit"),
            name,
        ));
    }
    let mut chars = name
        .chars()
        .enumerate()
        .skip_while(|(_, c)| !c.is_whitespace());
    if chars.next().is_some() {
        if let Some((i, _)) = chars.find(|(_, c)| !c.is_whitespace()) {
            return Some(Finding::blocking(
                Category::ExtraneousInput,
                true,
                n,
                col + i as u32,
                format!(
                    "extraneous input after '{}' in name '{name}'",
                    name.split_whitespace().next().unwrap_or("")
                ),
                name,
            ));
        }
    }
    None
}

/// Splits a feature line's content (indentation already removed) into the
/// visual name and the attribute remainder starting at `{`.
pub(crate) fn split_feature_content(content: &str) -> (&str, &str) {
    match content.find('{') {
        Some(i) => (content[..i].trim_end(), &content[i..]),
        None => (content.trim_end(), ""),
    }
}

fn lex_feature(
    content: &str,
    n: u32,
    col: u32,
    tokens: &mut Vec<Token>,
    findings: &mut Vec<Finding>,
) {
    let (name, rest) = split_feature_content(content);
    if name.is_empty() {
        findings.push(Finding::blocking(
            Category::MismatchedInput,
            false,
            n,
            col,
            "missing feature name",
            content,
        ));
    } else {
        findings.extend(check_name(name, n, col));
        tokens.push(Token {
            kind: TokenKind::Ident(name.to_string()),
            line: n,
            column: col,
        });
    }
    if rest.is_empty() {
        return;
    }

    let rest_col = col + content[..content.len() - rest.len()].chars().count() as u32;
    tokens.push(Token {
        kind: TokenKind::LBrace,
        line: n,
        column: rest_col,
    });
    let inner = &rest[1..];
    let Some(close) = inner.find('}') else {
        findings.push(Finding::blocking(
            Category::MismatchedInput,
            false,
            n,
            rest_col,
            "missing '}' after attributes",
            rest,
        ));
        return;
    };
    let flags = &inner[..close];
    let after = inner[close + 1..].trim_end();
    let close_col = rest_col + 1 + flags.chars().count() as u32;

    if !flags.trim().is_empty() {
        let mut offset = 0usize;
        for (i, flag) in flags.split(',').enumerate() {
            let flag_col = rest_col + 1 + flags[..offset].chars().count() as u32;
            offset += flag.len() + 1;
            if i > 0 {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    line: n,
                    column: flag_col - 1,
                });
            }
            let trimmed = flag.trim();
            if trimmed == "abstract" {
                tokens.push(Token {
                    kind: TokenKind::Ident(trimmed.to_string()),
                    line: n,
                    column: flag_col,
                });
            } else if trimmed.is_empty() {
                findings.push(Finding::blocking(
                    Category::MismatchedInput,
                    false,
                    n,
                    flag_col,
                    "empty attribute",
                    flags,
                ));
            } else {
                findings.push(Finding::blocking(
                    Category::ExtraneousInput,
                    false,
                    n,
                    flag_col,
                    format!("unsupported attribute '{trimmed}'"),
                    trimmed,
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::RBrace,
        line: n,
        column: close_col,
    });
    if !after.is_empty() {
        findings.push(Finding::blocking(
            Category::ExtraneousInput,
            false,
            n,
            close_col + 1,
            "extraneous input after attributes",
            after,
        ));
    }
}

const OPERATOR_CHARS: &[char] = &['!', '&', '|', '=', '<', '>', '(', ')'];

/// Characters that end a name inside a constraint line.
pub(crate) fn is_constraint_delimiter(c: char) -> bool {
    c.is_whitespace() || OPERATOR_CHARS.contains(&c)
}

fn lex_constraint(
    content: &str,
    n: u32,
    col: u32,
    tokens: &mut Vec<Token>,
    findings: &mut Vec<Finding>,
) {
    let chars: Vec<char> = content.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = col + i as u32;
        let simple = match c {
            '!' => Some(TokenKind::Not),
            '&' => Some(TokenKind::And),
            '|' => Some(TokenKind::Or),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = simple {
            tokens.push(Token {
                kind,
                line: n,
                column,
            });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if chars[i..].starts_with(&['=', '>']) {
            tokens.push(Token {
                kind: TokenKind::Implies,
                line: n,
                column,
            });
            i += 2;
        } else if chars[i..].starts_with(&['<', '=', '>']) {
            tokens.push(Token {
                kind: TokenKind::Iff,
                line: n,
                column,
            });
            i += 3;
        } else if OPERATOR_CHARS.contains(&c) {
            findings.push(Finding::blocking(
                Category::ExtraneousInput,
                false,
                n,
                column,
                format!("extraneous input '{c}'"),
                String::from(c),
            ));
            i += 1;
        } else {
            let start = i;
            while i < chars.len() && !is_constraint_delimiter(chars[i]) {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            findings.extend(check_name(&name, n, column));
            tokens.push(Token {
                kind: TokenKind::Ident(name),
                line: n,
                column,
            });
        }
    }
}
