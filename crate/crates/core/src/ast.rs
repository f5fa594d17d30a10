use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureModel {
    pub root: Feature,
    pub constraints: Vec<Constraint>,
}

impl FeatureModel {
    /// All features in pre-order.
    pub fn features(&self) -> Vec<&Feature> {
        let mut out = Vec::new();
        self.root.walk(&mut |f| out.push(f));
        out
    }

    pub fn feature_count(&self) -> usize {
        self.features().len()
    }

    /// Applies `rename` to every feature name and every constraint reference.
    pub fn rename_all(&mut self, rename: &dyn Fn(&str) -> Option<String>) {
        self.root.rename_all(rename);
        for c in &mut self.constraints {
            c.rename_all(rename);
        }
    }
}

/// A node of the feature tree. Equality ignores `source_line`.
#[derive(Debug, Clone, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Feature {
    pub name: String,
    pub is_abstract: bool,
    pub groups: Vec<Group>,
    pub source_line: u32,
}

impl PartialEq for Feature {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.is_abstract == other.is_abstract
            && self.groups == other.groups
    }
}

impl Feature {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            is_abstract: false,
            groups: Vec::new(),
            source_line: 0,
        }
    }

    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Feature)) {
        visit(self);
        for g in &self.groups {
            for child in &g.children {
                child.walk(visit);
            }
        }
    }

    fn rename_all(&mut self, rename: &dyn Fn(&str) -> Option<String>) {
        if let Some(n) = rename(&self.name) {
            self.name = n;
        }
        for g in &mut self.groups {
            for child in &mut g.children {
                child.rename_all(rename);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GroupKind {
    Or,
    Alternative,
    Mandatory,
    Optional,
}

impl GroupKind {
    pub const ALL: [GroupKind; 4] = [
        GroupKind::Or,
        GroupKind::Alternative,
        GroupKind::Mandatory,
        GroupKind::Optional,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            GroupKind::Or => "or",
            GroupKind::Alternative => "alternative",
            GroupKind::Mandatory => "mandatory",
            GroupKind::Optional => "optional",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Group {
    pub kind: GroupKind,
    pub children: Vec<Feature>,
}

/// Cross-tree constraint expression. `Paren` records source parentheses so
/// printing reproduces the parsed tree exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Constraint {
    Ref(String),
    Not(Box<Constraint>),
    And(Box<Constraint>, Box<Constraint>),
    Or(Box<Constraint>, Box<Constraint>),
    Implies(Box<Constraint>, Box<Constraint>),
    Iff(Box<Constraint>, Box<Constraint>),
    Paren(Box<Constraint>),
}

impl Constraint {
    pub fn reference(name: impl Into<String>) -> Self {
        Constraint::Ref(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Constraint) -> Self {
        Constraint::Not(Box::new(inner))
    }

    pub fn and(l: Constraint, r: Constraint) -> Self {
        Constraint::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Constraint, r: Constraint) -> Self {
        Constraint::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Constraint, r: Constraint) -> Self {
        Constraint::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Constraint, r: Constraint) -> Self {
        Constraint::Iff(Box::new(l), Box::new(r))
    }

    pub fn paren(inner: Constraint) -> Self {
        Constraint::Paren(Box::new(inner))
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(&self) -> u8 {
        match self {
            Constraint::Iff(..) => 1,
            Constraint::Implies(..) => 2,
            Constraint::Or(..) => 3,
            Constraint::And(..) => 4,
            Constraint::Not(_) => 5,
            Constraint::Ref(_) | Constraint::Paren(_) => 6,
        }
    }

    pub fn references(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Constraint::Ref(n) => out.push(n),
            Constraint::Not(e) | Constraint::Paren(e) => e.collect_refs(out),
            Constraint::And(l, r)
            | Constraint::Or(l, r)
            | Constraint::Implies(l, r)
            | Constraint::Iff(l, r) => {
                l.collect_refs(out);
                r.collect_refs(out);
            }
        }
    }

    fn rename_all(&mut self, rename: &dyn Fn(&str) -> Option<String>) {
        match self {
            Constraint::Ref(n) => {
                if let Some(new) = rename(n) {
                    *n = new;
                }
            }
            Constraint::Not(e) | Constraint::Paren(e) => e.rename_all(rename),
            Constraint::And(l, r)
            | Constraint::Or(l, r)
            | Constraint::Implies(l, r)
            | Constraint::Iff(l, r) => {
                l.rename_all(rename);
                r.rename_all(rename);
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::printer::write_constraint(f, self)
    }
}
