use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::GroupKind;
use crate::is_identifier_char;
use crate::lexer::split_feature_content;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("name is empty and cannot be repaired")]
pub struct Unfixable;

/// Replaces every character outside `[A-Za-z0-9_]` with `_` and prefixes `_`
/// when the name starts with a digit.
pub fn sanitize_identifier(name: &str) -> Result<String, Unfixable> {
    let name = name.trim();
    if name.is_empty() {
        return Err(Unfixable);
    }
    let mut out = String::with_capacity(name.len() + 1);
    if name.starts_with(|c: char| c.is_ascii_digit()) {
        out.push('_');
    }
    out.extend(
        name.chars()
            .map(|c| if is_identifier_char(c) { c } else { '_' }),
    );
    Ok(out)
}

/// Splits a feature line into its visual name and attribute remainder.
///
/// The name is everything before the first `{`, trimmed, so `5 MP` is one
/// name. Returns `None` for group keyword lines and lines without content.
pub fn extract_feature_name(line: &str) -> Option<(&str, &str)> {
    let content = line.trim_matches([' ', '\t']);
    if content.is_empty() || GroupKind::from_keyword(content).is_some() {
        return None;
    }
    Some(split_feature_content(content))
}

/// Original feature name to repaired name, in first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RenameMap {
    entries: Vec<(String, String)>,
}

impl RenameMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a mapping unless `original` is already present.
    pub fn insert(&mut self, original: impl Into<String>, renamed: impl Into<String>) {
        let original = original.into();
        if self.get(&original).is_none() {
            self.entries.push((original, renamed.into()));
        }
    }

    pub fn get(&self, original: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(o, _)| o == original)
            .map(|(_, r)| r.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(o, r)| (o.as_str(), r.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for RenameMap {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        let mut m = RenameMap::new();
        for (k, v) in iter {
            m.insert(k, v);
        }
        m
    }
}

/// Makes repaired names unique: later entries that clash with an earlier one
/// get `_2`, `_3`, ... appended.
pub fn resolve_collisions(map: &RenameMap) -> RenameMap {
    resolve_collisions_with(map, &BTreeSet::new())
}

/// Like [`resolve_collisions`], also avoiding names already in use.
pub fn resolve_collisions_with(map: &RenameMap, reserved: &BTreeSet<String>) -> RenameMap {
    let mut used = reserved.clone();
    let mut out = RenameMap::new();
    for (original, renamed) in map.iter() {
        let mut candidate = String::from(renamed);
        let mut n = 2;
        while used.contains(&candidate) {
            candidate = format!("{renamed}_{n}");
            n += 1;
        }
        used.insert(candidate.clone());
        out.insert(original, candidate);
    }
    out
}
