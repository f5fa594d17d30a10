//! Inverse oracle for the fix engine: injects known defects into clean
//! models so tests can check that fixing undoes them.
//!
//! Every fixable operator here is undone by exactly one builtin rule:
//!
//! | operator            | repaired by      |
//! |---------------------|------------------|
//! | `InsertBlankLine`   | RULE-BLANK       |
//! | `InsertTabOnlyLine` | RULE-TABBLANK    |
//! | `RenameFeature`     | RULE-IDENT (+ RULE-PROPAGATE in constraints) |
//! | `ReencodeLatin1`    | RULE-ENC         |
//! | `SpacesForTabs`     | RULE-INDENT      |
//!
//! `RemoveHeader` and `IndentJump` produce defects no rule repairs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::lexer::{is_constraint_delimiter, line_shape, LineShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameDefect {
    Dot,
    Space,
    Hyphen,
    LeadingDigit,
    /// Appends `é`; only a Latin-1 re-encode makes this an encoding defect.
    NonAscii,
}

impl NameDefect {
    pub const ALL: [NameDefect; 5] = [
        NameDefect::Dot,
        NameDefect::Space,
        NameDefect::Hyphen,
        NameDefect::LeadingDigit,
        NameDefect::NonAscii,
    ];

    pub fn apply(self, name: &str) -> String {
        match self {
            NameDefect::Dot => format!("{name}.1"),
            NameDefect::Space => format!("{name} X"),
            NameDefect::Hyphen => format!("{name}-x"),
            NameDefect::LeadingDigit => format!("1{name}"),
            NameDefect::NonAscii => format!("{name}\u{e9}"),
        }
    }
}

/// One step of a corruption plan. Line numbers are 1-based and refer to the
/// text as it stands when the step runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corruption {
    InsertBlankLine { before_line: usize },
    InsertTabOnlyLine { before_line: usize },
    RenameFeature { name: String, defect: NameDefect },
    ReencodeLatin1,
    SpacesForTabs { line: usize, width: usize },
    RemoveHeader,
    IndentJump { line: usize },
}

impl Corruption {
    pub fn is_fixable(&self) -> bool {
        !matches!(
            self,
            Corruption::RemoveHeader | Corruption::IndentJump { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    NoSuchLine,
    NotInterior,
    NoSuchFeature,
    NoLeadingTabs,
    AsciiOnly,
    NotLatin1,
    NoHeader,
    NoJumpPossible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corrupted {
    pub bytes: Vec<u8>,
    /// Clean name to corrupted name, for every applied rename.
    pub renames: Vec<(String, String)>,
    /// Plan entries that could not be applied, by index.
    pub skipped: Vec<(usize, SkipReason)>,
}

impl Corrupted {
    pub fn applied(&self, plan_len: usize) -> usize {
        plan_len - self.skipped.len()
    }
}

pub fn corrupt_model(clean: &str, plan: &[Corruption]) -> Corrupted {
    let mut lines: Vec<String> = clean.lines().map(String::from).collect();
    let mut renames = Vec::new();
    let mut skipped = Vec::new();
    let mut latin1: Option<usize> = None;

    for (idx, step) in plan.iter().enumerate() {
        let result = match step {
            Corruption::InsertBlankLine { before_line } => {
                insert_before(&mut lines, *before_line, "")
            }
            Corruption::InsertTabOnlyLine { before_line } => {
                insert_before(&mut lines, *before_line, "\t")
            }
            Corruption::RenameFeature { name, defect } => {
                let bad = defect.apply(name);
                rename(&mut lines, name, &bad).map(|()| renames.push((name.clone(), bad)))
            }
            Corruption::ReencodeLatin1 => {
                latin1 = Some(idx);
                Ok(())
            }
            Corruption::SpacesForTabs { line, width } => spaces_for_tabs(&mut lines, *line, *width),
            Corruption::RemoveHeader => match lines.iter().position(|l| l.trim_end() == "features")
            {
                Some(i) => {
                    lines.remove(i);
                    Ok(())
                }
                None => Err(SkipReason::NoHeader),
            },
            Corruption::IndentJump { line } => indent_jump(&mut lines, *line),
        };
        if let Err(reason) = result {
            skipped.push((idx, reason));
        }
    }

    let mut text = String::new();
    for l in &lines {
        text.push_str(l);
        text.push('\n');
    }
    let bytes = match latin1 {
        Some(idx) if text.is_ascii() => {
            skipped.push((idx, SkipReason::AsciiOnly));
            text.into_bytes()
        }
        Some(idx) => match text
            .chars()
            .map(u8::try_from)
            .collect::<Result<Vec<u8>, _>>()
        {
            Ok(b) => b,
            Err(_) => {
                skipped.push((idx, SkipReason::NotLatin1));
                text.into_bytes()
            }
        },
        None => text.into_bytes(),
    };
    skipped.sort_by_key(|(i, _)| *i);
    Corrupted {
        bytes,
        renames,
        skipped,
    }
}

fn content_depth(line: &str) -> Option<usize> {
    match line_shape(line) {
        LineShape::Content(lead, _) => Some(lead.len()),
        _ => None,
    }
}

fn insert_before(
    lines: &mut Vec<String>,
    before_line: usize,
    text: &str,
) -> Result<(), SkipReason> {
    let target = before_line
        .checked_sub(1)
        .and_then(|i| lines.get(i))
        .ok_or(SkipReason::NoSuchLine)?;
    match content_depth(target) {
        Some(d) if d > 0 => {
            lines.insert(before_line - 1, String::from(text));
            Ok(())
        }
        _ => Err(SkipReason::NotInterior),
    }
}

fn rename(lines: &mut [String], name: &str, bad: &str) -> Result<(), SkipReason> {
    let mut in_constraints = false;
    let mut target = None;
    for (i, line) in lines.iter().enumerate() {
        match content_depth(line) {
            Some(0) => in_constraints = line.trim_end() == "constraints",
            Some(d) if !in_constraints => {
                let content = &line[d..];
                let end = content.find('{').unwrap_or(content.len());
                if content[..end].trim_end() == name {
                    target = Some((i, d));
                    break;
                }
            }
            _ => {}
        }
    }
    let (i, d) = target.ok_or(SkipReason::NoSuchFeature)?;
    lines[i] = format!("{}{}{}", &lines[i][..d], bad, &lines[i][d + name.len()..]);
    in_constraints = false;
    for line in lines.iter_mut() {
        match content_depth(line) {
            Some(0) => in_constraints = line.trim_end() == "constraints",
            Some(_) if in_constraints => *line = replace_token(line, name, bad),
            _ => {}
        }
    }
    Ok(())
}

fn replace_token(line: &str, name: &str, bad: &str) -> String {
    let mut out = String::new();
    let mut rest = line;
    let mut prev_delim = true;
    while !rest.is_empty() {
        if prev_delim
            && rest.starts_with(name)
            && rest[name.len()..]
                .chars()
                .next()
                .is_none_or(is_constraint_delimiter)
        {
            out.push_str(bad);
            rest = &rest[name.len()..];
            prev_delim = false;
            continue;
        }
        let c = rest.chars().next().expect("non-empty");
        out.push(c);
        prev_delim = is_constraint_delimiter(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

fn spaces_for_tabs(lines: &mut [String], line: usize, width: usize) -> Result<(), SkipReason> {
    let l = line
        .checked_sub(1)
        .and_then(|i| lines.get_mut(i))
        .ok_or(SkipReason::NoSuchLine)?;
    let tabs = l.len() - l.trim_start_matches('\t').len();
    if tabs == 0 || width == 0 {
        return Err(SkipReason::NoLeadingTabs);
    }
    *l = format!("{}{}", " ".repeat(tabs * width), &l[tabs..]);
    Ok(())
}

fn indent_jump(lines: &mut [String], line: usize) -> Result<(), SkipReason> {
    let i = line
        .checked_sub(1)
        .filter(|&i| i < lines.len())
        .ok_or(SkipReason::NoSuchLine)?;
    let depth = content_depth(&lines[i]).ok_or(SkipReason::NoJumpPossible)?;
    let prev = lines[..i]
        .iter()
        .rev()
        .find_map(|l| content_depth(l))
        .ok_or(SkipReason::NoJumpPossible)?;
    if depth != prev + 1 {
        return Err(SkipReason::NoJumpPossible);
    }
    lines[i].insert(0, '\t');
    Ok(())
}
