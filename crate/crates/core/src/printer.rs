use alloc::string::String;
use core::fmt::{self, Write};

use crate::ast::{Constraint, Feature, FeatureModel};

/// Renders a model in canonical form: tab indentation, one item per line,
/// `{abstract}` attributes, a final newline. The `constraints` block is
/// omitted when there are no constraints.
pub fn serialize_model(model: &FeatureModel) -> String {
    let mut out = String::from("features\n");
    write_feature(&mut out, &model.root, 1);
    if !model.constraints.is_empty() {
        out.push_str("constraints\n");
        for c in &model.constraints {
            // Writing into a String cannot fail.
            let _ = writeln!(out, "\t{c}");
        }
    }
    out
}

fn write_feature(out: &mut String, feature: &Feature, depth: usize) {
    indent(out, depth);
    out.push_str(&feature.name);
    if feature.is_abstract {
        out.push_str(" {abstract}");
    }
    out.push('\n');
    for group in &feature.groups {
        indent(out, depth + 1);
        out.push_str(group.kind.keyword());
        out.push('\n');
        for child in &group.children {
            write_feature(out, child, depth + 2);
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push('\t');
    }
}

/// Prints `Paren` nodes as written and adds parentheses only where a tree
/// built by hand would otherwise re-parse differently.
pub(crate) fn write_constraint(f: &mut dyn Write, c: &Constraint) -> fmt::Result {
    match c {
        Constraint::Ref(name) => f.write_str(name),
        Constraint::Paren(inner) => {
            f.write_char('(')?;
            write_constraint(f, inner)?;
            f.write_char(')')
        }
        Constraint::Not(inner) => {
            f.write_char('!')?;
            write_operand(f, inner, c.precedence())
        }
        Constraint::And(l, r) => write_left_assoc(f, l, " & ", r, c.precedence()),
        Constraint::Or(l, r) => write_left_assoc(f, l, " | ", r, c.precedence()),
        Constraint::Iff(l, r) => write_left_assoc(f, l, " <=> ", r, c.precedence()),
        Constraint::Implies(l, r) => {
            write_operand(f, l, c.precedence() + 1)?;
            f.write_str(" => ")?;
            write_operand(f, r, c.precedence())
        }
    }
}

fn write_left_assoc(
    f: &mut dyn Write,
    l: &Constraint,
    op: &str,
    r: &Constraint,
    prec: u8,
) -> fmt::Result {
    write_operand(f, l, prec)?;
    f.write_str(op)?;
    write_operand(f, r, prec + 1)
}

fn write_operand(f: &mut dyn Write, c: &Constraint, min_prec: u8) -> fmt::Result {
    if c.precedence() >= min_prec {
        write_constraint(f, c)
    } else {
        f.write_char('(')?;
        write_constraint(f, c)?;
        f.write_char(')')
    }
}
