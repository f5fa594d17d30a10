use core::fmt;
use core::str::FromStr;

use crate::diagnostic::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Encoding,
    TabBlank,
    Blank,
    Indent,
    Ident,
    Propagate,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::Encoding,
        RuleId::TabBlank,
        RuleId::Blank,
        RuleId::Indent,
        RuleId::Ident,
        RuleId::Propagate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Encoding => "RULE-ENC",
            RuleId::TabBlank => "RULE-TABBLANK",
            RuleId::Blank => "RULE-BLANK",
            RuleId::Indent => "RULE-INDENT",
            RuleId::Ident => "RULE-IDENT",
            RuleId::Propagate => "RULE-PROPAGATE",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown fix rule '{0}'")]
pub struct UnknownRule(pub alloc::string::String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownRule(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleScope {
    File,
    Line,
    Name,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixRule {
    pub id: RuleId,
    pub categories: &'static [Category],
    pub scope: RuleScope,
    pub description: &'static str,
}

impl FixRule {
    pub fn targets(&self, category: Category) -> bool {
        self.categories.contains(&category)
    }
}

const RULES: [FixRule; 6] = [
    FixRule {
        id: RuleId::Encoding,
        categories: &[Category::Encoding],
        scope: RuleScope::File,
        description: "strip byte-order mark, transcode Latin-1 to UTF-8, convert CRLF to LF",
    },
    FixRule {
        id: RuleId::TabBlank,
        categories: &[Category::TabOnBlankLine],
        scope: RuleScope::Line,
        description: "delete lines holding only tabs or spaces",
    },
    FixRule {
        id: RuleId::Blank,
        categories: &[Category::MismatchedInput, Category::BlankLine],
        scope: RuleScope::Line,
        description: "delete blank lines inside blocks",
    },
    FixRule {
        id: RuleId::Indent,
        categories: &[Category::Indentation],
        scope: RuleScope::Line,
        description: "convert leading space runs to tabs",
    },
    FixRule {
        id: RuleId::Ident,
        categories: &[Category::ExtraneousInput, Category::TokenRecognition],
        scope: RuleScope::Name,
        description:
            "replace illegal characters in feature names with '_' and prefix leading digits",
    },
    FixRule {
        id: RuleId::Propagate,
        categories: &[Category::ExtraneousInput, Category::TokenRecognition],
        scope: RuleScope::Line,
        description: "rewrite renamed features inside constraint lines",
    },
];

/// The rule base, in application order.
pub fn builtin_rules() -> &'static [FixRule] {
    &RULES
}
