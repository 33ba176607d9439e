//! Liffig block syntax: `L: assertion` followed by `return` or an
//! `if ... fi` block of guarded arms.

use std::collections::HashSet;

use super::diag::Diagnostic;
use super::lexer::{lex, LexOptions, Tok, Token};
use super::syntax::{is_keyword, Cursor, PResult, SyntaxError};
use super::{finish, Occurrences, ParseOptions, Parsed};
use crate::model::{
    BlockBody, Formula, GuardedArm, Ident, LabelBlock, Span, Target, Type, VarDecl,
};

pub fn parse_liffig(src: &str, opts: ParseOptions) -> Result<Parsed, Vec<Diagnostic>> {
    let toks = lex(src, LexOptions::default());
    let eof = end_position(src);
    let mut errors = Vec::new();

    let mut labels = HashSet::new();
    for k in 0..toks.len() {
        if let Some(name) = label_at(&toks, k) {
            if !labels.insert(name.to_string()) {
                let t = &toks[k];
                errors.push(Diagnostic::error(format!("duplicate label {name}"), t.line, t.col));
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let mut p = LiffigParser {
        src,
        toks: &toks,
        cur: Cursor::new(&toks, &labels, eof),
        labels: &labels,
        eof,
        occ: Occurrences::default(),
        warnings: Vec::new(),
        opts,
    };
    match p.program() {
        Ok((decls, blocks)) => {
            let LiffigParser { occ, warnings, .. } = p;
            finish(decls, blocks, occ, warnings)
        }
        Err(e) => Err(vec![Diagnostic::error(e.message, e.line, e.col)]),
    }
}

/// `IDENT :` at the start of a line.
fn label_at(toks: &[Token], k: usize) -> Option<&str> {
    let t = &toks[k];
    match &t.tok {
        Tok::Ident(s)
            if t.line_start && !is_keyword(s) && toks.get(k + 1).map(|n| &n.tok) == Some(&Tok::Colon) =>
        {
            Some(s)
        }
        _ => None,
    }
}

pub(crate) fn end_position(src: &str) -> (u32, u32) {
    let line = src.matches('\n').count() as u32 + 1;
    let col = src.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
    (line, col)
}

struct LiffigParser<'a> {
    src: &'a str,
    toks: &'a [Token],
    cur: Cursor<'a>,
    labels: &'a HashSet<String>,
    eof: (u32, u32),
    occ: Occurrences,
    warnings: Vec<Diagnostic>,
    opts: ParseOptions,
}

impl<'a> LiffigParser<'a> {
    fn program(&mut self) -> PResult<(Vec<VarDecl>, Vec<LabelBlock>)> {
        let mut decls = Vec::new();
        let mut blocks = Vec::new();
        while !self.cur.at_end() {
            if self.cur.peek_kw("var") {
                if !blocks.is_empty() {
                    return self.cur.error("variable declarations must precede the first label");
                }
                decls.push(parse_decl(&mut self.cur)?);
                continue;
            }
            blocks.push(self.block()?);
        }
        Ok((decls, blocks))
    }

    fn block(&mut self) -> PResult<LabelBlock> {
        let (line, col) = self.cur.location();
        if label_at(self.toks, self.cur.pos).is_none() {
            return self.cur.error(format!(
                "expected a label declaration `L:`, found {}",
                self.cur.peek().map_or("end of input".into(), Tok::describe)
            ));
        }
        let label = self.cur.ident("label")?;
        self.cur.expect(&Tok::Colon, "`:`")?;
        let colon_end = self.toks[self.cur.pos - 1].end;

        let start = self.cur.pos;
        let mut end = start;
        while end < self.toks.len() && !self.ends_assertion(end) {
            end += 1;
        }
        let region_end = self.toks.get(end).map_or(self.src.len(), |t| t.start);
        let region_eof = self.toks.get(end).map_or(self.eof, |t| (t.line, t.col));
        if start == end {
            return Err(SyntaxError {
                message: format!("label {label} has no assertion"),
                line,
                col,
            });
        }
        let assertion = parse_assertion(
            &self.toks[start..end],
            self.src,
            colon_end,
            region_end,
            self.labels,
            region_eof,
            &label,
        );
        self.occ.absorb(&assertion.occ);
        if let Some(w) = assertion.warning {
            self.warnings.push(w);
        }
        self.cur.pos = end;

        let body = if self.cur.eat_kw("return") {
            self.cur.eat(&Tok::Semi);
            BlockBody::Return
        } else if self.cur.peek_kw("if") {
            BlockBody::Arms(self.arms(&label)?)
        } else {
            return self.cur.error(format!("expected `if` or `return` after the assertion of {label}"));
        };
        self.occ.absorb_cursor(&self.cur);
        Ok(LabelBlock {
            label,
            assertion: assertion.formula,
            doc: assertion.doc,
            body,
            span: Span::new(line, col),
        })
    }

    fn ends_assertion(&self, k: usize) -> bool {
        let t = &self.toks[k];
        t.line_start
            && (t.tok.is_ident("if")
                || t.tok.is_ident("return")
                || t.tok.is_ident("var")
                || label_at(self.toks, k).is_some())
    }

    fn arms(&mut self, label: &Ident) -> PResult<Vec<GuardedArm>> {
        self.cur.expect_kw("if")?;
        let mut arms = Vec::new();
        if self.cur.eat_kw("fi") {
            return Ok(arms);
        }
        loop {
            arms.push(self.arm()?);
            if self.cur.eat(&Tok::Bar) {
                continue;
            }
            if self.cur.eat_kw("fi") {
                break;
            }
            if self.cur.peek_kw("if") {
                if self.opts.lenient {
                    self.cur.bump();
                    break;
                }
                return self.cur.error(format!(
                    "block {label} is terminated by `if`; expected `fi` (accepted only in lenient mode)"
                ));
            }
            return self.cur.error(format!(
                "missing `fi`: expected `|` or `fi` in block {label}, found {}",
                self.cur.peek().map_or("end of input".into(), Tok::describe)
            ));
        }
        Ok(arms)
    }

    fn arm(&mut self) -> PResult<GuardedArm> {
        let (line, col) = self.cur.location();
        let guard = self.cur.formula()?;
        self.cur.expect(&Tok::Arrow, "`->` after guard")?;
        let mut body = Vec::new();
        let target = loop {
            if self.cur.eat_kw("goto") {
                break Target::Label(self.cur.ident("label after `goto`")?);
            }
            if self.cur.eat_kw("return") {
                break Target::Return;
            }
            if self.cur.at_end()
                || matches!(self.cur.peek(), Some(Tok::Bar))
                || self.cur.peek_kw("fi")
                || label_at(self.toks, self.cur.pos).is_some()
            {
                return self.cur.error("missing `goto` at the end of the arm");
            }
            body.push(self.cur.command()?);
            if !self.cur.eat(&Tok::Semi) && !self.cur.peek_kw("goto") && !self.cur.peek_kw("return") {
                return self.cur.error(format!(
                    "expected `;` or `goto` after command, found {}",
                    self.cur.peek().map_or("end of input".into(), Tok::describe)
                ));
            }
        };
        self.cur.eat(&Tok::Semi);
        Ok(GuardedArm {
            guard,
            body,
            target,
            span: Span::new(line, col),
        })
    }
}

/// `var name: int | float | int[] [output]`
pub(crate) fn parse_decl(cur: &mut Cursor) -> PResult<VarDecl> {
    cur.expect_kw("var")?;
    let name = cur.ident("variable name")?;
    cur.expect(&Tok::Colon, "`:`")?;
    let ty = if cur.eat_kw("int") {
        if cur.eat(&Tok::LBracket) {
            cur.expect(&Tok::RBracket, "`]`")?;
            Type::IntArray
        } else {
            Type::Int
        }
    } else if cur.eat_kw("float") {
        Type::Float
    } else {
        return cur.error("expected a type: `int`, `float` or `int[]`");
    };
    let output = cur.eat_kw("output");
    Ok(VarDecl { name, ty, output })
}

pub(crate) struct Assertion {
    pub formula: Formula,
    pub doc: Option<String>,
    pub warning: Option<Diagnostic>,
    pub occ: Occurrences,
}

/// Parse the tokens of one assertion. A formula followed by leftover text
/// keeps the text as documentation; text that is not a formula at all
/// becomes `true` with a warning.
pub(crate) fn parse_assertion(
    toks: &[Token],
    src: &str,
    region_start: usize,
    region_end: usize,
    labels: &HashSet<String>,
    eof: (u32, u32),
    label: &Ident,
) -> Assertion {
    let mut cur = Cursor::new(toks, labels, eof);
    match cur.formula() {
        Ok(formula) => {
            let rest_start = cur.token().map_or_else(
                || toks.last().map_or(region_start, |t| t.end),
                |t| t.start,
            );
            let mut occ = Occurrences::default();
            occ.absorb_cursor(&cur);
            Assertion {
                formula,
                doc: normalize_doc(&src[rest_start..region_end]),
                warning: None,
                occ,
            }
        }
        Err(_) => {
            let first = &toks[0];
            Assertion {
                formula: Formula::Bool(true),
                doc: normalize_doc(&src[region_start..region_end]),
                warning: Some(Diagnostic::warning(
                    format!("assertion of {label} is not a formula; treated as `true`"),
                    first.line,
                    first.col,
                )),
                occ: Occurrences::default(),
            }
        }
    }
}

/// Collapse comment markers and whitespace so that documentation survives
/// printing as a single `//` comment.
pub(crate) fn normalize_doc(raw: &str) -> Option<String> {
    let mut words = Vec::new();
    for line in raw.lines() {
        let mut l = line.trim();
        while let Some(rest) = l.strip_prefix("//") {
            l = rest.trim_start();
        }
        words.extend(l.split_whitespace());
    }
    if words.is_empty() {
        None
    } else {
        Some(words.join(" "))
    }
}
