//! The two-section triple format:
//!
//! ```text
//! Label declarations
//! ------------------
//! S: n = n0 & a = a0 & n0 > 0
//! H: printed(n0 * a0)
//!
//! Triples
//! -------
//! {S} skip {A}
//! ```
//!
//! Triples sharing a pre-label become the arms of one block, in textual
//! order; blocks follow the order of the label declarations.

use std::collections::HashSet;

use super::diag::Diagnostic;
use super::lexer::{lex, LexOptions, Tok};
use super::liffig::{end_position, parse_assertion, parse_decl};
use super::syntax::{Cursor, PResult};
use super::{finish, Occurrences, Parsed};
use crate::model::{BlockBody, Command, Formula, GuardedArm, Ident, LabelBlock, Span, Target, HALT};

#[derive(PartialEq)]
enum Section {
    Preamble,
    Labels,
    Triples,
}

/// A piece of source text with the position of its first character.
struct Region {
    text: String,
    line: u32,
    col: u32,
    last_line: u32,
}

impl Region {
    fn new(text: &str, line: u32, col: u32) -> Region {
        Region {
            text: text.to_string(),
            line,
            col,
            last_line: line,
        }
    }

    fn extend(&mut self, text: &str, line: u32) {
        for _ in self.last_line..line {
            self.text.push('\n');
        }
        self.text.push_str(text);
        self.last_line = line;
    }

    fn lex_opts(&self, brace_comments: bool) -> LexOptions {
        LexOptions {
            brace_comments,
            first_line: self.line,
            first_col: self.col,
        }
    }

    fn eof(&self) -> (u32, u32) {
        let (l, c) = end_position(&self.text);
        if l == 1 {
            (self.line, self.col + c - 1)
        } else {
            (self.line + l - 1, c)
        }
    }
}

struct LabelDecl {
    name: Ident,
    region: Region,
}

pub fn parse_triples(src: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let mut section = Section::Preamble;
    let mut decl_lines: Vec<Region> = Vec::new();
    let mut labels: Vec<LabelDecl> = Vec::new();
    let mut triples: Vec<Region> = Vec::new();
    let mut errors = Vec::new();
    let mut saw_labels = false;

    for (k, line) in src.lines().enumerate() {
        let lineno = k as u32 + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with("//") || t.chars().all(|c| c == '-') {
            continue;
        }
        if t == "Label declarations" {
            section = Section::Labels;
            saw_labels = true;
            continue;
        }
        if t == "Triples" {
            section = Section::Triples;
            continue;
        }
        let indent = (line.len() - line.trim_start().len()) as u32;
        match section {
            Section::Preamble => {
                if t.starts_with("var ") {
                    decl_lines.push(Region::new(t, lineno, indent + 1));
                } else {
                    errors.push(Diagnostic::error(
                        "expected `var` declarations or a `Label declarations` section",
                        lineno,
                        indent + 1,
                    ));
                }
            }
            Section::Labels => match split_label(t) {
                Some((name, rest_offset)) => {
                    if labels.iter().any(|l| l.name.as_str() == name) {
                        errors.push(Diagnostic::error(format!("duplicate label {name}"), lineno, indent + 1));
                    }
                    labels.push(LabelDecl {
                        name: Ident::new(name),
                        region: Region::new(&t[rest_offset..], lineno, indent + 1 + rest_offset as u32),
                    });
                }
                None => match labels.last_mut() {
                    Some(l) => l.region.extend(line, lineno),
                    None => errors.push(Diagnostic::error("expected a label declaration `L: assertion`", lineno, indent + 1)),
                },
            },
            Section::Triples => {
                if t.starts_with('{') {
                    triples.push(Region::new(t, lineno, indent + 1));
                } else {
                    match triples.last_mut() {
                        Some(r) => r.extend(line, lineno),
                        None => errors.push(Diagnostic::error("expected a triple `{P} C {Q}`", lineno, indent + 1)),
                    }
                }
            }
        }
    }
    if !saw_labels && !src.trim().is_empty() {
        errors.push(Diagnostic::error("missing `Label declarations` section", 1, 1));
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let label_set: HashSet<String> = labels.iter().map(|l| l.name.to_string()).collect();
    let mut occ = Occurrences::default();
    let mut warnings = Vec::new();

    let mut decls = Vec::new();
    for r in &decl_lines {
        let toks = lex(&r.text, r.lex_opts(true));
        let mut cur = Cursor::new(&toks, &label_set, r.eof());
        let d = parse_decl(&mut cur).and_then(|d| {
            if cur.at_end() {
                Ok(d)
            } else {
                cur.error("unexpected text after declaration")
            }
        });
        match d {
            Ok(d) => decls.push(d),
            Err(e) => return Err(vec![Diagnostic::error(e.message, e.line, e.col)]),
        }
    }

    let mut assertions = Vec::new();
    for l in &labels {
        let toks = lex(&l.region.text, l.region.lex_opts(true));
        if toks.is_empty() {
            return Err(vec![Diagnostic::error(
                format!("label {} has no assertion", l.name),
                l.region.line,
                l.region.col,
            )]);
        }
        let a = parse_assertion(
            &toks,
            &l.region.text,
            0,
            l.region.text.len(),
            &label_set,
            l.region.eof(),
            &l.name,
        );
        occ.absorb(&a.occ);
        if let Some(w) = a.warning.clone() {
            warnings.push(w);
        }
        assertions.push(a);
    }

    let mut arms: Vec<(Ident, GuardedArm)> = Vec::new();
    for r in &triples {
        let toks = lex(&r.text, r.lex_opts(false));
        let mut cur = Cursor::new(&toks, &label_set, r.eof());
        match triple(&mut cur, &label_set) {
            Ok((pre, mut arm)) => {
                arm.span = Span::new(r.line, r.col);
                occ.absorb_cursor(&cur);
                arms.push((pre, arm));
            }
            Err(e) => return Err(vec![Diagnostic::error(e.message, e.line, e.col)]),
        }
    }

    let blocks = labels
        .iter()
        .zip(assertions)
        .map(|(l, a)| {
            let mine: Vec<GuardedArm> = arms
                .iter()
                .filter(|(pre, _)| *pre == l.name)
                .map(|(_, arm)| arm.clone())
                .collect();
            let body = if mine.is_empty() && l.name.as_str() == HALT {
                BlockBody::Return
            } else {
                BlockBody::Arms(mine)
            };
            LabelBlock {
                label: l.name.clone(),
                assertion: a.formula,
                doc: a.doc,
                body,
                span: Span::new(l.region.line, 1),
            }
        })
        .collect();
    finish(decls, blocks, occ, warnings)
}

/// `L:` at the start of a trimmed line; returns the name and the offset
/// just past the colon.
fn split_label(t: &str) -> Option<(&str, usize)> {
    let end = t
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
        .map_or(t.len(), |(i, _)| i);
    let name = &t[..end];
    if !Ident::is_valid(name) || name == "var" {
        return None;
    }
    let rest = &t[end..];
    let ws = rest.len() - rest.trim_start().len();
    let rest = rest.trim_start();
    if rest.starts_with(':') && !rest.starts_with(":=") {
        Some((name, end + ws + 1))
    } else {
        None
    }
}

fn triple(cur: &mut Cursor, labels: &HashSet<String>) -> PResult<(Ident, GuardedArm)> {
    cur.expect(&Tok::LBrace, "`{`")?;
    let pre = label_ref(cur, labels)?;
    cur.expect(&Tok::RBrace, "`}`")?;
    let mut cmds = Vec::new();
    if cur.peek() != Some(&Tok::LBrace) {
        loop {
            cmds.push(cur.command()?);
            if !cur.eat(&Tok::Semi) {
                break;
            }
        }
    }
    cur.expect(&Tok::LBrace, "`{` before the post-label")?;
    let target = if cur.eat_kw("return") {
        Target::Return
    } else {
        Target::Label(label_ref(cur, labels)?)
    };
    cur.expect(&Tok::RBrace, "`}`")?;
    if !cur.at_end() {
        return cur.error("unexpected text after triple");
    }
    let (guard, body) = match cmds.first() {
        Some(Command::Guard(_)) => {
            let Command::Guard(g) = cmds.remove(0) else {
                unreachable!()
            };
            (g, cmds)
        }
        _ => (Formula::Bool(true), cmds),
    };
    Ok((pre, GuardedArm::new(guard, body, target)))
}

fn label_ref(cur: &mut Cursor, labels: &HashSet<String>) -> PResult<Ident> {
    let (line, col) = cur.location();
    let l = cur.ident("label")?;
    if !labels.contains(l.as_str()) {
        return Err(super::syntax::SyntaxError {
            message: format!("undefined label {l}"),
            line,
            col,
        });
    }
    Ok(l)
}
