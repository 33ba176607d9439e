//! Liffig and triple-format front end: lexing, parsing, structural
//! validation and canonical printing.

mod diag;
mod infer;
mod lexer;
mod liffig;
mod pretty;
mod syntax;
mod triples;
mod validate;

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

pub use diag::{has_errors, Diagnostic, Severity};
pub use infer::infer_signature;
pub use liffig::parse_liffig;
pub use pretty::{pretty_print, pretty_print_liffig, pretty_print_triples};
pub use triples::parse_triples;
pub use validate::{guards_exhaustive, validate};

use crate::model::{Command, Formula, Ident, LabelBlock, Program, Signature, Term, VarDecl, HALT, START};
use syntax::Cursor;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept `if` as a block terminator, as printed in the DNF figure.
    pub lenient: bool,
}

impl ParseOptions {
    pub fn lenient() -> ParseOptions {
        ParseOptions { lenient: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Liffig,
    Triples,
}

impl SourceFormat {
    /// Triple sources open with a `Label declarations` heading (possibly
    /// after `var` lines); anything else is read as Liffig.
    pub fn detect(text: &str) -> SourceFormat {
        for line in text.lines() {
            let t = line.trim();
            if t.is_empty() || t.starts_with("//") || t.starts_with("var ") {
                continue;
            }
            return if t == "Label declarations" {
                SourceFormat::Triples
            } else {
                SourceFormat::Liffig
            };
        }
        SourceFormat::Liffig
    }
}

#[derive(Clone, Debug)]
pub struct SourceFile {
    pub text: String,
    pub format: SourceFormat,
}

impl SourceFile {
    pub fn new(text: impl Into<String>, format: SourceFormat) -> SourceFile {
        SourceFile {
            text: text.into(),
            format,
        }
    }

    pub fn detect(text: impl Into<String>) -> SourceFile {
        let text = text.into();
        let format = SourceFormat::detect(&text);
        SourceFile { text, format }
    }

    pub fn parse(&self, opts: ParseOptions) -> Result<Parsed, Vec<Diagnostic>> {
        match self.format {
            SourceFormat::Liffig => parse_liffig(&self.text, opts),
            SourceFormat::Triples => parse_triples(&self.text),
        }
    }
}

/// A successfully parsed program with any warnings raised on the way.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub program: Program,
    pub warnings: Vec<Diagnostic>,
}

/// Variable occurrences in source order, used to infer a signature when a
/// source declares none.
#[derive(Clone, Debug, Default)]
pub(crate) struct Occurrences {
    pub seen: Vec<Ident>,
    set: HashSet<Ident>,
    pub derefs: BTreeSet<Ident>,
}

impl Occurrences {
    fn add(&mut self, v: &Ident) {
        if self.set.insert(v.clone()) {
            self.seen.push(v.clone());
        }
    }

    pub fn absorb(&mut self, other: &Occurrences) {
        for v in &other.seen {
            self.add(v);
        }
        self.derefs.extend(other.derefs.iter().cloned());
    }

    pub fn absorb_cursor(&mut self, c: &Cursor) {
        for v in &c.seen {
            self.add(v);
        }
        self.derefs.extend(c.derefs.iter().cloned());
    }
}

/// Shared tail of both parsers: signature (declared or inferred), required
/// labels, warnings.
pub(crate) fn finish(
    decls: Vec<VarDecl>,
    blocks: Vec<LabelBlock>,
    occ: Occurrences,
    mut warnings: Vec<Diagnostic>,
) -> Result<Parsed, Vec<Diagnostic>> {
    let mut errors = Vec::new();
    let mut names = HashSet::new();
    for d in &decls {
        if !names.insert(d.name.clone()) {
            errors.push(Diagnostic::error(format!("variable {} declared twice", d.name), 1, 1));
        }
    }
    let (end_line, _) = blocks.last().map_or((1, 1), |b| (b.span.line, b.span.col));
    if !blocks.iter().any(|b| b.label.as_str() == START) {
        errors.push(Diagnostic::error("missing start label S", end_line, 1));
    }
    if !blocks.iter().any(|b| b.label.as_str() == HALT) && !blocks.is_empty() {
        errors.push(Diagnostic::error("missing halt label H", end_line, 1));
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let mut program = Program {
        signature: Signature { vars: decls },
        blocks,
    };
    if program.signature.vars.is_empty() && !occ.seen.is_empty() {
        program.signature = infer_signature(&program, &occ.seen, &occ.derefs);
        let listing: Vec<String> = program
            .signature
            .vars
            .iter()
            .map(|d| format!("{}: {}{}", d.name, d.ty, if d.output { " output" } else { "" }))
            .collect();
        warnings.push(Diagnostic::warning(
            format!("no variable declarations; inferred {}", listing.join(", ")),
            1,
            1,
        ));
    }
    Ok(Parsed { program, warnings })
}

fn parse_fragment<T>(
    src: &str,
    what: &str,
    f: impl FnOnce(&mut Cursor) -> syntax::PResult<T>,
) -> Result<T, Diagnostic> {
    let toks = lexer::lex(src, lexer::LexOptions::default());
    let labels = HashSet::new();
    let mut cur = Cursor::new(&toks, &labels, liffig::end_position(src));
    let out = f(&mut cur).and_then(|v| {
        if cur.at_end() {
            Ok(v)
        } else {
            cur.error(format!("unexpected text after {what}"))
        }
    });
    out.map_err(|e| Diagnostic::error(e.message, e.line, e.col))
}

/// A standalone term such as `(n - 1) / 2`.
pub fn parse_term(src: &str) -> Result<Term, Diagnostic> {
    parse_fragment(src, "term", |c| c.term())
}

/// A standalone formula without label references.
pub fn parse_formula(src: &str) -> Result<Formula, Diagnostic> {
    parse_fragment(src, "formula", |c| c.formula())
}

/// A `;`-separated command sequence.
pub fn parse_commands(src: &str) -> Result<Vec<Command>, Diagnostic> {
    parse_fragment(src, "command", |c| {
        let mut cmds = vec![c.command()?];
        while c.eat(&lexer::Tok::Semi) {
            cmds.push(c.command()?);
        }
        Ok(cmds)
    })
}
