use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::names::{extract_feature_name, resolve_collisions_with, sanitize_identifier, RenameMap};
use super::rules::{FixRule, RuleId, RuleScope};
use crate::analysis::{analyze_file, analyze_source, FileAnalysis, FileRef, Status};
use crate::is_identifier;
use crate::lexer::{interior_blank_mask, is_constraint_delimiter, line_shape, LineShape};
use crate::source::{decode_bytes, SourceText};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixOptions {
    pub enabled: BTreeSet<RuleId>,
    /// Spaces per tab for RULE-INDENT.
    pub indent_width: usize,
}

impl Default for FixOptions {
    fn default() -> Self {
        Self {
            enabled: RuleId::ALL.into_iter().collect(),
            indent_width: 4,
        }
    }
}

impl FixOptions {
    pub fn only(rules: impl IntoIterator<Item = RuleId>) -> Self {
        Self {
            enabled: rules.into_iter().collect(),
            ..Self::default()
        }
    }
}

/// One applied edit. `line` is the 1-based line in the decoded original, or 0
/// for whole-file encoding changes. `after` is `None` when the line was
/// deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChangeRecord {
    pub rule_id: RuleId,
    pub line: u32,
    pub before: String,
    pub after: Option<String>,
}

impl fmt::Display for ChangeRecord {
    /// `line:rule_id: "before" -> "after"`; deletions print `(deleted)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {:?} -> ", self.line, self.rule_id, self.before)?;
        match &self.after {
            Some(a) => write!(f, "{a:?}"),
            None => f.write_str("(deleted)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixOutcome {
    pub text: String,
    pub changes: Vec<ChangeRecord>,
    pub renames: RenameMap,
}

struct WorkLine {
    origin: u32,
    text: String,
}

/// Runs the enabled rules in registry order over a decoded file.
///
/// A rule runs only when the analysis holds a diagnostic in one of its
/// categories; file-scoped rules always run. Files with status `ok` come back
/// unchanged.
pub fn apply_rules(
    src: &SourceText,
    analysis: &FileAnalysis,
    rules: &[FixRule],
    options: &FixOptions,
) -> FixOutcome {
    let mut outcome = FixOutcome {
        text: src.decoded.clone(),
        changes: Vec::new(),
        renames: RenameMap::new(),
    };
    if analysis.status == Status::Ok {
        return outcome;
    }

    let mut lines: Vec<WorkLine> = src
        .lines()
        .enumerate()
        .map(|(i, l)| WorkLine {
            origin: i as u32 + 1,
            text: String::from(l),
        })
        .collect();
    let changes = &mut outcome.changes;

    for rule in rules {
        if !options.enabled.contains(&rule.id) {
            continue;
        }
        let triggered = rule.scope == RuleScope::File
            || analysis
                .diagnostics
                .iter()
                .any(|d| rule.targets(d.category));
        if !triggered {
            continue;
        }
        match rule.id {
            RuleId::Encoding => normalize_encoding(src, changes),
            RuleId::TabBlank => delete_lines(&mut lines, RuleId::TabBlank, changes, |shapes| {
                shapes
                    .iter()
                    .map(|s| *s == LineShape::WhitespaceOnly)
                    .collect()
            }),
            RuleId::Blank => {
                let trailing_from = lines
                    .iter()
                    .rposition(|l| !l.text.is_empty())
                    .map_or(0, |i| i + 1);
                delete_lines(&mut lines, RuleId::Blank, changes, |shapes| {
                    let interior = interior_blank_mask(shapes);
                    (0..shapes.len())
                        .map(|i| {
                            shapes[i] == LineShape::Empty && (i >= trailing_from || interior[i])
                        })
                        .collect()
                })
            }
            RuleId::Indent => convert_indentation(&mut lines, options.indent_width, changes),
            RuleId::Ident => outcome.renames = rename_features(&mut lines, changes),
            RuleId::Propagate => propagate_renames(&mut lines, &outcome.renames, changes),
        }
    }

    outcome.text = join_lines(lines.iter().map(|l| l.text.as_str()));
    outcome
}

fn join_lines<'a>(lines: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(l);
        out.push('\n');
    }
    out
}

fn normalize_encoding(src: &SourceText, changes: &mut Vec<ChangeRecord>) {
    let mut record = |before: &str, after: &str| {
        changes.push(ChangeRecord {
            rule_id: RuleId::Encoding,
            line: 0,
            before: before.into(),
            after: Some(after.into()),
        })
    };
    if src.had_bom {
        record("byte-order mark", "no byte-order mark");
    }
    if src.latin1_fallback {
        record("latin-1", "utf-8");
    }
    if src.had_crlf {
        record("crlf", "lf");
    }
}

fn delete_lines(
    lines: &mut Vec<WorkLine>,
    rule_id: RuleId,
    changes: &mut Vec<ChangeRecord>,
    doomed: impl FnOnce(&[LineShape<'_>]) -> Vec<bool>,
) {
    let kill = {
        let shapes: Vec<LineShape<'_>> = lines.iter().map(|l| line_shape(&l.text)).collect();
        doomed(&shapes)
    };
    let mut i = 0;
    lines.retain(|l| {
        let k = kill[i];
        i += 1;
        if k {
            changes.push(ChangeRecord {
                rule_id,
                line: l.origin,
                before: l.text.clone(),
                after: None,
            });
        }
        !k
    });
}

fn convert_indentation(lines: &mut [WorkLine], width: usize, changes: &mut Vec<ChangeRecord>) {
    if width == 0 {
        return;
    }
    for line in lines {
        let LineShape::Content(lead, content) = line_shape(&line.text) else {
            continue;
        };
        if lead.spaces == 0 || lead.spaces % width != 0 {
            continue;
        }
        let mut fixed: String =
            core::iter::repeat_n('\t', lead.tabs + lead.spaces / width).collect();
        fixed.push_str(content);
        changes.push(ChangeRecord {
            rule_id: RuleId::Indent,
            line: line.origin,
            before: core::mem::replace(&mut line.text, fixed.clone()),
            after: Some(fixed),
        });
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Start,
    Features,
    Constraints,
}

/// Labels each line with the block it belongs to. Indented lines before any
/// header count as feature lines, matching the lexer's recovery.
fn blocks(lines: &[WorkLine]) -> Vec<Option<Block>> {
    let mut block = Block::Start;
    lines
        .iter()
        .map(|l| match line_shape(&l.text) {
            LineShape::Content(lead, content) if lead.len() == 0 => {
                match content.trim_end() {
                    "features" => block = Block::Features,
                    "constraints" => block = Block::Constraints,
                    _ => {}
                }
                None
            }
            LineShape::Content(..) => {
                if block == Block::Start {
                    block = Block::Features;
                }
                Some(block)
            }
            _ => None,
        })
        .collect()
}

fn rename_features(lines: &mut [WorkLine], changes: &mut Vec<ChangeRecord>) -> RenameMap {
    let labels = blocks(lines);
    let feature_lines: Vec<usize> = (0..lines.len())
        .filter(|&i| labels[i] == Some(Block::Features))
        .collect();

    let mut wanted = RenameMap::new();
    let mut reserved = BTreeSet::new();
    for &i in &feature_lines {
        let Some((name, _)) = extract_feature_name(&lines[i].text) else {
            continue;
        };
        if is_identifier(name) {
            reserved.insert(String::from(name));
        } else if let Ok(clean) = sanitize_identifier(name) {
            wanted.insert(name, clean);
        }
    }
    let renames = resolve_collisions_with(&wanted, &reserved);

    for &i in &feature_lines {
        let line = &mut lines[i];
        let Some((name, _)) = extract_feature_name(&line.text) else {
            continue;
        };
        let Some(new_name) = renames.get(name) else {
            continue;
        };
        let start = line.text.len() - line.text.trim_start_matches([' ', '\t']).len();
        let mut fixed = String::from(&line.text[..start]);
        fixed.push_str(new_name);
        fixed.push_str(&line.text[start + name.len()..]);
        changes.push(ChangeRecord {
            rule_id: RuleId::Ident,
            line: line.origin,
            before: core::mem::replace(&mut line.text, fixed.clone()),
            after: Some(fixed),
        });
    }
    renames
}

fn propagate_renames(lines: &mut [WorkLine], renames: &RenameMap, changes: &mut Vec<ChangeRecord>) {
    if renames.is_empty() {
        return;
    }
    let mut keys: Vec<(&str, &str)> = renames.iter().collect();
    keys.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
    let labels = blocks(lines);
    for (i, line) in lines.iter_mut().enumerate() {
        if labels[i] != Some(Block::Constraints) {
            continue;
        }
        if let Some(fixed) = replace_whole_tokens(&line.text, &keys) {
            changes.push(ChangeRecord {
                rule_id: RuleId::Propagate,
                line: line.origin,
                before: core::mem::replace(&mut line.text, fixed.clone()),
                after: Some(fixed),
            });
        }
    }
}

/// Replaces occurrences of each key that are bounded by line ends, whitespace
/// or operator characters. Keys are tried longest first at each position.
fn replace_whole_tokens(text: &str, keys: &[(&str, &str)]) -> Option<String> {
    let mut out = String::with_capacity(text.len());
    let mut changed = false;
    let mut i = 0;
    let mut at_boundary = true;
    while i < text.len() {
        let rest = &text[i..];
        if at_boundary {
            let hit = keys.iter().find(|(k, _)| {
                rest.starts_with(k)
                    && rest[k.len()..]
                        .chars()
                        .next()
                        .is_none_or(is_constraint_delimiter)
            });
            if let Some((k, v)) = hit {
                out.push_str(v);
                i += k.len();
                changed = true;
                at_boundary = false;
                continue;
            }
        }
        let c = rest.chars().next().expect("non-empty");
        out.push(c);
        at_boundary = is_constraint_delimiter(c);
        i += c.len_utf8();
    }
    changed.then_some(out)
}

/// Rebuilds the fixed text from the original lines and a change log.
/// Whole-file records (line 0) do not touch lines.
pub fn replay_changes(original: &SourceText, changes: &[ChangeRecord]) -> String {
    let mut lines: Vec<Option<String>> = original.lines().map(|l| Some(String::from(l))).collect();
    for c in changes.iter().filter(|c| c.line > 0) {
        let slot = &mut lines[c.line as usize - 1];
        debug_assert_eq!(slot.as_deref(), Some(c.before.as_str()));
        *slot = c.after.clone();
    }
    join_lines(lines.iter().flatten().map(String::as_str))
}

/// Result of fixing one file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedFile {
    pub bytes: Vec<u8>,
    pub before: FileAnalysis,
    pub after: FileAnalysis,
    pub changes: Vec<ChangeRecord>,
    pub renames: RenameMap,
}

impl FixedFile {
    pub fn is_changed(&self, original: &[u8]) -> bool {
        self.bytes != original
    }
}

/// Decode, analyze, apply rules, re-analyze. Clean files are returned as-is.
pub fn fix_file(file: FileRef, raw: &[u8], rules: &[FixRule], options: &FixOptions) -> FixedFile {
    let src = decode_bytes(raw);
    let before = analyze_source(file.clone(), &src);
    if before.status == Status::Ok {
        return FixedFile {
            bytes: raw.to_vec(),
            after: before.clone(),
            before,
            changes: Vec::new(),
            renames: RenameMap::new(),
        };
    }
    let outcome = apply_rules(&src, &before, rules, options);
    let bytes = if options.enabled.contains(&RuleId::Encoding) {
        outcome.text.into_bytes()
    } else {
        encode_like(&outcome.text, &src)
    };
    let after = analyze_file(file, &bytes);
    FixedFile {
        bytes,
        before,
        after,
        changes: outcome.changes,
        renames: outcome.renames,
    }
}

/// Re-applies the original file's BOM, line endings and Latin-1 encoding.
fn encode_like(text: &str, src: &SourceText) -> Vec<u8> {
    let text = if src.had_crlf {
        text.replace('\n', "\r\n")
    } else {
        String::from(text)
    };
    let mut out = Vec::with_capacity(text.len() + 3);
    if src.had_bom {
        out.extend_from_slice(b"\xEF\xBB\xBF");
    }
    if src.latin1_fallback {
        for c in text.chars() {
            match u8::try_from(c) {
                Ok(b) => out.push(b),
                Err(_) => {
                    let mut buf = [0u8; 4];
                    out.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
                }
            }
        }
    } else {
        out.extend_from_slice(text.as_bytes());
    }
    out
}
