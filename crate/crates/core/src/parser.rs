use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{Constraint, Feature, FeatureModel, Group};
use crate::diagnostic::{sort_diagnostics, Category, Diagnostic, Severity};
use crate::lexer::{lex, Finding, Token, TokenKind};
use crate::source::SourceText;

/// Parses decoded source into a model.
///
/// A model is returned iff no exception-severity diagnostic was produced
/// (encoding findings included). Diagnostics come back sorted by line,
/// column, then category. In a failing file, the first blocking finding keeps
/// exception severity and later findings that a fix rule can repair are
/// reported as errors.
pub fn parse_model(src: &SourceText) -> (Option<FeatureModel>, Vec<Diagnostic>) {
    let lexed = lex(src);
    let mut findings: Vec<Finding> = src
        .encoding_findings
        .iter()
        .map(|d| Finding {
            diag: d.clone(),
            fixable: true,
        })
        .collect();
    let lexer_error_lines: BTreeSet<u32> =
        lexed.findings.iter().filter_map(|f| f.diag.line).collect();
    findings.extend(lexed.findings);

    let mut parser = Parser {
        findings: Vec::new(),
        lexer_error_lines,
        stack: Vec::new(),
        root: None,
        extra_roots: 0,
        constraints: Vec::new(),
        refs: Vec::new(),
        features_line: None,
    };
    parser.run(&lexed.tokens);
    let (root, constraints) = parser.finish();
    findings.append(&mut parser.findings);

    let model = root.map(|root| FeatureModel { root, constraints });
    if let Some(m) = &model {
        check_names(m, &parser.refs, &mut findings);
    }

    findings.sort_by(|a, b| a.diag.sort_key_cmp(&b.diag));
    let mut seen_exception = false;
    for f in &mut findings {
        if f.diag.severity == Severity::Exception {
            if seen_exception && f.fixable {
                f.diag.severity = Severity::Error;
            }
            seen_exception = true;
        }
    }
    let mut diags: Vec<Diagnostic> = findings.into_iter().map(|f| f.diag).collect();
    sort_diagnostics(&mut diags);

    if diags.iter().any(|d| d.severity == Severity::Exception) {
        (None, diags)
    } else {
        (model, diags)
    }
}

/// Duplicate feature names and constraint references to missing features.
/// Both are warnings: the model can still be built.
fn check_names(model: &FeatureModel, refs: &[(String, u32, u32)], findings: &mut Vec<Finding>) {
    let mut seen = BTreeSet::new();
    for f in model.features() {
        if !seen.insert(f.name.as_str()) {
            findings.push(Finding {
                diag: Diagnostic::new(
                    Severity::Warning,
                    Category::DuplicateFeature,
                    format!("feature '{}' is declared more than once", f.name),
                    f.name.clone(),
                )
                .at_line(f.source_line),
                fixable: false,
            });
        }
    }
    for (name, line, column) in refs {
        if !seen.contains(name.as_str()) {
            findings.push(Finding {
                diag: Diagnostic::new(
                    Severity::Warning,
                    Category::UnknownReference,
                    format!("constraint references unknown feature '{name}'"),
                    name.clone(),
                )
                .at(*line, *column),
                fixable: false,
            });
        }
    }
}

struct Line<'t> {
    number: u32,
    depth: usize,
    tokens: &'t [Token],
}

enum Frame {
    Feature {
        feature: Feature,
        depth: usize,
    },
    Group {
        group: Group,
        depth: usize,
        line: u32,
        column: u32,
    },
}

impl Frame {
    fn depth(&self) -> usize {
        match self {
            Frame::Feature { depth, .. } | Frame::Group { depth, .. } => *depth,
        }
    }
}

struct ParsedConstraint {
    expr: Constraint,
    refs: Vec<(String, u32, u32)>,
}

struct Parser {
    findings: Vec<Finding>,
    lexer_error_lines: BTreeSet<u32>,
    stack: Vec<Frame>,
    root: Option<Feature>,
    extra_roots: usize,
    constraints: Vec<ParsedConstraint>,
    refs: Vec<(String, u32, u32)>,
    features_line: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Start,
    Features,
    Constraints,
}

impl Parser {
    fn error(
        &mut self,
        category: Category,
        fixable: bool,
        line: u32,
        column: u32,
        msg: String,
        offending: &str,
    ) {
        self.findings.push(Finding::blocking(
            category, fixable, line, column, msg, offending,
        ));
    }

    fn run(&mut self, tokens: &[Token]) {
        let mut block = Block::Start;
        for line in split_lines(tokens) {
            let first = &line.tokens[0];
            match &first.kind {
                TokenKind::KwFeatures => {
                    self.close_frames(0);
                    block = Block::Features;
                    self.features_line.get_or_insert(line.number);
                }
                TokenKind::KwConstraints => {
                    self.close_frames(0);
                    block = Block::Constraints;
                }
                TokenKind::Unexpected(_) => {}
                _ if block == Block::Constraints => self.constraint_line(&line),
                _ => self.feature_tree_line(&line),
            }
        }
    }

    fn feature_tree_line(&mut self, line: &Line<'_>) {
        self.close_frames(line.depth);
        let first = &line.tokens[0];
        let parent_depth = self.stack.last().map_or(0, Frame::depth);
        if line.depth != parent_depth + 1 {
            // Indentation jump, already reported by the lexer.
            return;
        }
        match (&first.kind, self.stack.last()) {
            (TokenKind::Group(kind), Some(Frame::Feature { .. })) => {
                self.stack.push(Frame::Group {
                    group: Group {
                        kind: *kind,
                        children: Vec::new(),
                    },
                    depth: line.depth,
                    line: line.number,
                    column: first.column,
                });
            }
            (TokenKind::Group(kind), _) => {
                let msg = if self.stack.is_empty() {
                    format!("group `{}` has no parent feature", kind.keyword())
                } else {
                    format!("expected a feature name, found group `{}`", kind.keyword())
                };
                self.error(
                    Category::MismatchedInput,
                    false,
                    line.number,
                    first.column,
                    msg,
                    kind.keyword(),
                );
            }
            (TokenKind::Ident(name), None) if self.root.is_some() || self.extra_roots > 0 => {
                self.extra_roots += 1;
                let msg = format!("second root feature '{name}'");
                self.error(
                    Category::MismatchedInput,
                    false,
                    line.number,
                    first.column,
                    msg,
                    name,
                );
            }
            (TokenKind::Ident(name), Some(Frame::Feature { .. })) => {
                let msg = format!("expected a group keyword, found feature '{name}'");
                self.error(
                    Category::MismatchedInput,
                    false,
                    line.number,
                    first.column,
                    msg,
                    name,
                );
            }
            (TokenKind::Ident(name), _) => {
                let mut feature = Feature::new(name.clone());
                feature.source_line = line.number;
                feature.is_abstract = line.tokens[1..]
                    .iter()
                    .any(|t| t.kind == TokenKind::Ident("abstract".into()));
                self.stack.push(Frame::Feature {
                    feature,
                    depth: line.depth,
                });
            }
            // A line that starts with an attribute list has no name; reported
            // by the lexer.
            _ => {}
        }
    }

    /// Pops frames at `depth` or deeper, attaching each to its parent.
    fn close_frames(&mut self, depth: usize) {
        while self.stack.last().is_some_and(|f| f.depth() >= depth) {
            let frame = self.stack.pop().expect("checked non-empty");
            match frame {
                Frame::Feature { feature, .. } => match self.stack.last_mut() {
                    Some(Frame::Group { group, .. }) => group.children.push(feature),
                    Some(Frame::Feature { .. }) => unreachable!("features only nest inside groups"),
                    None => self.root = Some(feature),
                },
                Frame::Group {
                    group,
                    line,
                    column,
                    ..
                } => {
                    if group.children.is_empty() {
                        let kw = group.kind.keyword();
                        let msg = format!("group `{kw}` has no child features");
                        self.error(Category::MismatchedInput, false, line, column, msg, kw);
                    }
                    if let Some(Frame::Feature { feature, .. }) = self.stack.last_mut() {
                        feature.groups.push(group);
                    }
                }
            }
        }
    }

    fn constraint_line(&mut self, line: &Line<'_>) {
        let first = &line.tokens[0];
        if line.depth != 1 {
            if line.depth == 2 {
                self.error(
                    Category::MismatchedInput,
                    false,
                    line.number,
                    first.column,
                    "constraint lines must be indented exactly one level".into(),
                    "",
                );
            }
            return;
        }
        if self.lexer_error_lines.contains(&line.number) {
            return;
        }
        let mut p = ExprParser {
            tokens: line.tokens,
            pos: 0,
            refs: Vec::new(),
            line: line.number,
        };
        match p.iff() {
            Ok(expr) => {
                if let Some(extra) = line.tokens.get(p.pos) {
                    let fixable = matches!(extra.kind, TokenKind::Ident(_));
                    let text = token_text(&extra.kind);
                    self.error(
                        Category::ExtraneousInput,
                        fixable,
                        line.number,
                        extra.column,
                        format!("extraneous input '{text}' in constraint"),
                        &text,
                    );
                } else {
                    self.constraints
                        .push(ParsedConstraint { expr, refs: p.refs });
                }
            }
            Err(Finding { diag, fixable }) => self.findings.push(Finding { diag, fixable }),
        }
    }

    fn finish(&mut self) -> (Option<Feature>, Vec<Constraint>) {
        self.close_frames(0);
        if self.root.is_none() && self.extra_roots == 0 {
            if let Some(line) = self.features_line {
                self.error(
                    Category::MismatchedInput,
                    false,
                    line,
                    1,
                    "no root feature".into(),
                    "features",
                );
            }
        }
        let refs: Vec<_> = self
            .constraints
            .iter()
            .flat_map(|c| c.refs.iter().cloned())
            .collect();
        self.refs = refs;
        let constraints = self.constraints.drain(..).map(|c| c.expr).collect();
        (self.root.take(), constraints)
    }
}

fn split_lines(tokens: &[Token]) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    let mut depth = 0usize;
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i].kind {
            TokenKind::Indent => {
                depth += 1;
                i += 1;
            }
            TokenKind::Dedent => {
                depth = depth.saturating_sub(1);
                i += 1;
            }
            _ => {
                let number = tokens[i].line;
                let start = i;
                while i < tokens.len()
                    && tokens[i].line == number
                    && !matches!(tokens[i].kind, TokenKind::Indent | TokenKind::Dedent)
                {
                    i += 1;
                }
                lines.push(Line {
                    number,
                    depth,
                    tokens: &tokens[start..i],
                });
            }
        }
    }
    lines
}

fn token_text(kind: &TokenKind) -> String {
    let s = match kind {
        TokenKind::Ident(n) | TokenKind::Unexpected(n) => return n.clone(),
        TokenKind::KwFeatures => "features",
        TokenKind::KwConstraints => "constraints",
        TokenKind::Group(k) => k.keyword(),
        TokenKind::Indent | TokenKind::Dedent => "",
        TokenKind::LBrace => "{",
        TokenKind::RBrace => "}",
        TokenKind::Comma => ",",
        TokenKind::Not => "!",
        TokenKind::And => "&",
        TokenKind::Or => "|",
        TokenKind::Implies => "=>",
        TokenKind::Iff => "<=>",
        TokenKind::LParen => "(",
        TokenKind::RParen => ")",
    };
    String::from(s)
}

struct ExprParser<'t> {
    tokens: &'t [Token],
    pos: usize,
    refs: Vec<(String, u32, u32)>,
    line: u32,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn mismatch(&self, expected: &str) -> Finding {
        let (column, found) = match self.tokens.get(self.pos) {
            Some(t) => (t.column, token_text(&t.kind)),
            None => {
                let last = self.tokens.last().expect("constraint line has tokens");
                (
                    last.column + token_text(&last.kind).chars().count() as u32,
                    String::from("end of line"),
                )
            }
        };
        Finding::blocking(
            Category::MismatchedInput,
            false,
            self.line,
            column,
            format!("mismatched input '{found}', expected {expected}"),
            found,
        )
    }

    fn iff(&mut self) -> Result<Constraint, Finding> {
        let mut lhs = self.implies()?;
        while self.eat(&TokenKind::Iff) {
            let rhs = self.implies()?;
            lhs = Constraint::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Constraint, Finding> {
        let lhs = self.or()?;
        if self.eat(&TokenKind::Implies) {
            let rhs = self.implies()?;
            return Ok(Constraint::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Constraint, Finding> {
        let mut lhs = self.and()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.and()?;
            lhs = Constraint::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Constraint, Finding> {
        let mut lhs = self.unary()?;
        while self.eat(&TokenKind::And) {
            let rhs = self.unary()?;
            lhs = Constraint::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Constraint, Finding> {
        if self.eat(&TokenKind::Not) {
            return Ok(Constraint::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Constraint, Finding> {
        match self.tokens.get(self.pos) {
            Some(Token {
                kind: TokenKind::Ident(name),
                line,
                column,
            }) => {
                self.refs.push((name.clone(), *line, *column));
                self.pos += 1;
                Ok(Constraint::reference(name.clone()))
            }
            Some(Token {
                kind: TokenKind::LParen,
                ..
            }) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&TokenKind::RParen) {
                    return Err(self.mismatch("')'"));
                }
                Ok(Constraint::paren(inner))
            }
            _ => Err(self.mismatch("a feature name, '!' or '('")),
        }
    }
}
