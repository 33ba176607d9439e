//! Recursive descent over a token slice: terms, formulas and commands.
//!
//! Both surface formats share this grammar. The cursor backtracks in two
//! places only: `(` may open a formula or a term, and a command may be an
//! assignment or a formula used as a guard.

use std::collections::{BTreeSet, HashSet};
use std::str::FromStr;

use super::lexer::{Tok, Token};
use crate::model::{BinOp, Command, FloatLit, Formula, Ident, Int, LValue, Rel, Term};

pub const KEYWORDS: &[&str] = &[
    "var", "int", "float", "output", "if", "fi", "goto", "return", "skip", "swap", "print", "true",
    "false", "mod", "or", "rndm", "even", "odd", "perm", "seg", "alloc", "printed",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub message: String,
    pub line: u32,
    pub col: u32,
}

pub type PResult<T> = Result<T, SyntaxError>;

enum Operand {
    Term(Term),
    /// Inclusive segment `a[lo..hi]` inside a comparison.
    Slice(Ident, Term, Term),
}

pub struct Cursor<'a> {
    toks: &'a [Token],
    pub pos: usize,
    labels: &'a HashSet<String>,
    /// Position reported for errors at end of input.
    eof: (u32, u32),
    /// Variables in order of first occurrence.
    pub seen: Vec<Ident>,
    seen_set: HashSet<Ident>,
    /// Names written as `*x` (host out-parameters).
    pub derefs: BTreeSet<Ident>,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], labels: &'a HashSet<String>, eof: (u32, u32)) -> Cursor<'a> {
        Cursor {
            toks,
            pos: 0,
            labels,
            eof,
            seen: Vec::new(),
            seen_set: HashSet::new(),
            derefs: BTreeSet::new(),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub fn token(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn location(&self) -> (u32, u32) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self.eof,
        }
    }

    pub fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let (line, col) = self.location();
        Err(SyntaxError {
            message: message.into(),
            line,
            col,
        })
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_string(),
        }
    }

    pub fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.peek_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn peek_kw(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_ident(kw))
    }

    pub fn expect(&mut self, t: &Tok, what: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", self.found()))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.found()))
        }
    }

    /// A non-keyword identifier.
    pub fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                self.pos += 1;
                Ok(Ident::new(s))
            }
            _ => self.error(format!("expected {what}, found {}", self.found())),
        }
    }

    fn var(&mut self, what: &str) -> PResult<Ident> {
        let v = self.ident(what)?;
        self.note_var(&v);
        Ok(v)
    }

    fn note_var(&mut self, v: &Ident) {
        if self.seen_set.insert(v.clone()) {
            self.seen.push(v.clone());
        }
    }

    fn save(&self) -> (usize, usize) {
        (self.pos, self.seen.len())
    }

    fn restore(&mut self, (pos, n): (usize, usize)) {
        self.pos = pos;
        for v in self.seen.drain(n..) {
            self.seen_set.remove(&v);
        }
    }

    // ---- terms ----

    pub fn term(&mut self) -> PResult<Term> {
        let mut l = self.mul_term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(l),
            };
            self.pos += 1;
            let r = self.mul_term()?;
            l = Term::bin(op, l, r);
        }
    }

    fn mul_term(&mut self) -> PResult<Term> {
        let mut l = self.unary_term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                Some(t) if t.is_ident("mod") => BinOp::Mod,
                _ => return Ok(l),
            };
            self.pos += 1;
            let r = self.unary_term()?;
            l = Term::bin(op, l, r);
        }
    }

    fn unary_term(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Int(s)) => {
                        let s = format!("-{s}");
                        self.pos += 1;
                        Ok(Term::Int(Int::from_str(&s).expect("lexed integer")))
                    }
                    Some(Tok::Float(x)) => {
                        let x = -*x;
                        self.pos += 1;
                        Ok(Term::Float(FloatLit(x)))
                    }
                    _ => Ok(Term::Neg(Box::new(self.unary_term()?))),
                }
            }
            Some(Tok::Star) => {
                self.pos += 1;
                let v = self.var("variable after `*`")?;
                self.derefs.insert(v.clone());
                Ok(Term::Var(v))
            }
            _ => self.power_term(),
        }
    }

    fn power_term(&mut self) -> PResult<Term> {
        let base = self.primary_term()?;
        if self.eat(&Tok::Caret) {
            let exp = self.unary_term()?;
            return Ok(Term::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn primary_term(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                Ok(Term::Int(Int::from_str(s).expect("lexed integer")))
            }
            Some(Tok::Float(x)) => {
                self.pos += 1;
                Ok(Term::Float(FloatLit(*x)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let v = self.var("term")?;
                if self.eat(&Tok::LBracket) {
                    let i = self.term()?;
                    self.expect(&Tok::RBracket, "`]`")?;
                    Ok(Term::Index(v, Box::new(i)))
                } else {
                    Ok(Term::Var(v))
                }
            }
            _ => self.error(format!("expected a term, found {}", self.found())),
        }
    }

    // ---- formulas ----

    pub fn formula(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_kw("or") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = Vec::new();
        loop {
            let (f, chain) = self.negation()?;
            match f {
                // a comparison chain contributes its links directly
                Formula::And(links) if chain => parts.extend(links),
                f => parts.push(f),
            }
            if !self.eat(&Tok::Amp) {
                break;
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn negation(&mut self) -> PResult<(Formula, bool)> {
        if self.eat(&Tok::Bang) {
            let (f, _) = self.negation()?;
            return Ok((Formula::Not(Box::new(f)), false));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<(Formula, bool)> {
        match self.peek() {
            Some(t) if t.is_ident("true") => {
                self.pos += 1;
                Ok((Formula::Bool(true), false))
            }
            Some(t) if t.is_ident("false") => {
                self.pos += 1;
                Ok((Formula::Bool(false), false))
            }
            Some(Tok::Ident(s))
                if matches!(
                    s.as_str(),
                    "even" | "odd" | "perm" | "seg" | "alloc" | "printed"
                ) =>
            {
                let name = s.clone();
                self.pos += 1;
                Ok((self.builtin(&name)?, false))
            }
            Some(Tok::LParen) => {
                let mark = self.save();
                self.pos += 1;
                if let Ok(f) = self.formula() {
                    if self.eat(&Tok::RParen) && !self.continues_term() {
                        return Ok((f, false));
                    }
                }
                self.restore(mark);
                self.chain()
            }
            Some(Tok::Ident(s)) if self.labels.contains(s.as_str()) && !self.label_is_var() => {
                let l = Ident::new(s);
                self.pos += 1;
                Ok((Formula::Label(l), false))
            }
            _ => self.chain(),
        }
    }

    /// After a parenthesized group, does the input continue as a term or
    /// comparison (so the group was a term)?
    fn continues_term(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Plus
                    | Tok::Minus
                    | Tok::Star
                    | Tok::Slash
                    | Tok::Caret
                    | Tok::Eq
                    | Tok::Ne
                    | Tok::Lt
                    | Tok::Le
                    | Tok::Gt
                    | Tok::Ge
            )
        ) || self.peek_kw("mod")
    }

    /// A label name used in term position (`X[..]`, `X + 1`, `X < y`).
    fn label_is_var(&self) -> bool {
        matches!(
            self.peek_at(1),
            Some(
                Tok::LBracket
                    | Tok::LParen
                    | Tok::Plus
                    | Tok::Minus
                    | Tok::Star
                    | Tok::Slash
                    | Tok::Caret
                    | Tok::Eq
                    | Tok::Ne
                    | Tok::Lt
                    | Tok::Le
                    | Tok::Gt
                    | Tok::Ge
            )
        ) || self.peek_at(1).is_some_and(|t| t.is_ident("mod"))
    }

    fn builtin(&mut self, name: &str) -> PResult<Formula> {
        self.expect(&Tok::LParen, &format!("`(` after `{name}`"))?;
        let f = match name {
            "even" => Formula::Even(self.term()?),
            "odd" => Formula::Odd(self.term()?),
            "printed" => Formula::Printed(self.term()?),
            "perm" => {
                let a = self.var("array name")?;
                self.expect(&Tok::Comma, "`,`")?;
                let b = self.var("array name")?;
                Formula::Perm(a, b)
            }
            "seg" => {
                let array = self.var("array name")?;
                self.expect(&Tok::Comma, "`,`")?;
                let lo = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let hi = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let rel = match self.rel() {
                    Some(r) => r,
                    None => return self.error(format!("expected a relation, found {}", self.found())),
                };
                self.expect(&Tok::Comma, "`,`")?;
                let bound = self.term()?;
                Formula::Seg {
                    array,
                    lo,
                    hi,
                    rel,
                    bound,
                }
            }
            "alloc" => {
                let array = self.var("array name")?;
                self.expect(&Tok::Comma, "`,`")?;
                let lo = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let hi = self.term()?;
                Formula::Alloc { array, lo, hi }
            }
            _ => unreachable!("not a builtin: {name}"),
        };
        self.expect(&Tok::RParen, "`)`")?;
        Ok(f)
    }

    fn rel(&mut self) -> Option<Rel> {
        let r = match self.peek()? {
            Tok::Eq => Rel::Eq,
            Tok::Ne => Rel::Ne,
            Tok::Lt => Rel::Lt,
            Tok::Le => Rel::Le,
            Tok::Gt => Rel::Gt,
            Tok::Ge => Rel::Ge,
            _ => return None,
        };
        self.pos += 1;
        Some(r)
    }

    /// `t1 rel t2 rel t3 ...`, one comparison per adjacent pair. The bool
    /// marks a multi-link chain whose links may be flattened into an
    /// enclosing conjunction.
    fn chain(&mut self) -> PResult<(Formula, bool)> {
        let mut operands = vec![self.operand()?];
        let mut rels = Vec::new();
        while let Some(r) = self.rel() {
            rels.push(r);
            operands.push(self.operand()?);
        }
        if rels.is_empty() {
            return self.error(format!("expected a comparison operator, found {}", self.found()));
        }
        let mut links = Vec::with_capacity(rels.len());
        for (k, rel) in rels.into_iter().enumerate() {
            links.push(self.link(&operands[k], rel, &operands[k + 1])?);
        }
        Ok(if links.len() == 1 {
            (links.pop().unwrap(), false)
        } else {
            (Formula::And(links), true)
        })
    }

    fn link(&self, l: &Operand, rel: Rel, r: &Operand) -> PResult<Formula> {
        Ok(match (l, r) {
            (Operand::Term(a), Operand::Term(b)) => Formula::Cmp(rel, a.clone(), b.clone()),
            (Operand::Slice(array, lo, hi), Operand::Term(t)) => Formula::Seg {
                array: array.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
                rel,
                bound: t.clone(),
            },
            (Operand::Term(t), Operand::Slice(array, lo, hi)) => Formula::Seg {
                array: array.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
                rel: rel.flip(),
                bound: t.clone(),
            },
            (Operand::Slice(..), Operand::Slice(..)) => {
                return self.error("cannot compare two array segments");
            }
        })
    }

    fn operand(&mut self) -> PResult<Operand> {
        if let (Some(Tok::Ident(s)), Some(Tok::LBracket | Tok::LParen)) = (self.peek(), self.peek_at(1))
        {
            if !is_keyword(s) {
                let mark = self.save();
                if let Some(op) = self.try_slice()? {
                    return Ok(op);
                }
                self.restore(mark);
            }
        }
        Ok(Operand::Term(self.term()?))
    }

    /// `a[lo..hi]`, `a[lo..hi)`, `a(lo..hi]`. Returns `None` when the input
    /// is not a slice after all.
    fn try_slice(&mut self) -> PResult<Option<Operand>> {
        let a = self.var("array name")?;
        let open_excl = match self.bump() {
            Some(Tok::LBracket) => false,
            _ => true,
        };
        let lo = match self.term() {
            Ok(t) => t,
            Err(_) => return Ok(None),
        };
        if !self.eat(&Tok::DotDot) {
            return Ok(None);
        }
        let hi = self.term()?;
        let close_excl = match self.peek() {
            Some(Tok::RBracket) => false,
            Some(Tok::RParen) => true,
            _ => return self.error(format!("expected `]` or `)`, found {}", self.found())),
        };
        self.pos += 1;
        let lo = if open_excl {
            Term::bin(BinOp::Add, lo, Term::int(1))
        } else {
            lo
        };
        let hi = if close_excl {
            Term::bin(BinOp::Sub, hi, Term::int(1))
        } else {
            hi
        };
        Ok(Some(Operand::Slice(a, lo, hi)))
    }

    // ---- commands ----

    pub fn command(&mut self) -> PResult<Command> {
        match self.peek() {
            Some(t) if t.is_ident("skip") => {
                self.pos += 1;
                Ok(Command::Skip)
            }
            Some(t) if t.is_ident("swap") => {
                self.pos += 1;
                self.expect(&Tok::LParen, "`(` after `swap`")?;
                let a = self.var("array name")?;
                self.expect(&Tok::Comma, "`,`")?;
                let i = self.term()?;
                self.expect(&Tok::Comma, "`,`")?;
                let j = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Command::Swap(a, i, j))
            }
            Some(t) if t.is_ident("print") => {
                self.pos += 1;
                Ok(Command::Print(self.term()?))
            }
            Some(Tok::Incr | Tok::Decr) => {
                let op = if self.bump() == Some(&Tok::Incr) {
                    BinOp::Add
                } else {
                    BinOp::Sub
                };
                let v = self.var("variable")?;
                Ok(step_assign(v, op))
            }
            Some(Tok::Ident(_)) if matches!(self.peek_at(1), Some(Tok::Incr | Tok::Decr)) => {
                let v = self.var("variable")?;
                let op = if self.bump() == Some(&Tok::Incr) {
                    BinOp::Add
                } else {
                    BinOp::Sub
                };
                Ok(step_assign(v, op))
            }
            _ => {
                let mark = self.save();
                let derefs = self.derefs.clone();
                if let Some(lv) = self.try_lvalue() {
                    return self.assignment(lv);
                }
                self.restore(mark);
                self.derefs = derefs;
                Ok(Command::Guard(self.formula()?))
            }
        }
    }

    /// An lvalue followed by `:=`, or `None` without consuming errors.
    fn try_lvalue(&mut self) -> Option<LValue> {
        let deref = self.eat(&Tok::Star);
        let v = self.var("variable").ok()?;
        if deref {
            self.derefs.insert(v.clone());
        }
        let lv = if self.eat(&Tok::LBracket) {
            let i = self.term().ok()?;
            if !self.eat(&Tok::RBracket) {
                return None;
            }
            LValue::Index(v, i)
        } else {
            LValue::Var(v)
        };
        self.eat(&Tok::Assign).then_some(lv)
    }

    fn assignment(&mut self, lv: LValue) -> PResult<Command> {
        if self.peek_kw("rndm") {
            let v = match lv {
                LValue::Var(v) => v,
                LValue::Index(..) => return self.error("`rndm` can only be assigned to a variable"),
            };
            self.pos += 1;
            self.expect(&Tok::LParen, "`(` after `rndm`")?;
            let lo = self.term()?;
            self.expect(&Tok::Comma, "`,`")?;
            let hi = self.term()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(Command::Choose(v, lo, hi));
        }
        Ok(Command::Assign(lv, self.term()?))
    }
}

fn step_assign(v: Ident, op: BinOp) -> Command {
    Command::Assign(
        LValue::Var(v.clone()),
        Term::bin(op, Term::Var(v), Term::int(1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::lexer::{lex, LexOptions};

    fn with_cursor<T>(src: &str, labels: &[&str], f: impl FnOnce(&mut Cursor) -> PResult<T>) -> (PResult<T>, bool) {
        let toks = lex(src, LexOptions::default());
        let labels: HashSet<String> = labels.iter().map(|s| s.to_string()).collect();
        let mut c = Cursor::new(&toks, &labels, (1, 1));
        let r = f(&mut c);
        let done = c.at_end();
        (r, done)
    }

    fn formula(src: &str) -> Formula {
        let (r, done) = with_cursor(src, &["A", "B"], |c| c.formula());
        assert!(done, "leftover input in {src}");
        r.unwrap()
    }

    fn command(src: &str) -> Command {
        let (r, done) = with_cursor(src, &["A"], |c| c.command());
        assert!(done, "leftover input in {src}");
        r.unwrap()
    }

    #[test]
    fn precedence_and_literals() {
        let (t, _) = with_cursor("(n-1)/2 + -3 * a[i]", &[], |c| c.term());
        assert_eq!(t.unwrap().to_string(), "(n - 1) / 2 + (-3 * a[i])");
        let (t, _) = with_cursor("z * a ^ n", &[], |c| c.term());
        assert_eq!(t.unwrap(), Term::bin(
            BinOp::Mul,
            Term::var("z"),
            Term::bin(BinOp::Pow, Term::var("a"), Term::var("n")),
        ));
        let (t, _) = with_cursor("x mod 2 - -y", &[], |c| c.term());
        assert_eq!(t.unwrap(), Term::bin(
            BinOp::Sub,
            Term::bin(BinOp::Mod, Term::var("x"), Term::int(2)),
            Term::Neg(Box::new(Term::var("y"))),
        ));
    }

    #[test]
    fn chains_flatten_into_conjunctions() {
        let f = formula("m<=f<=s & odd(n)");
        let Formula::And(parts) = f else { panic!() };
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].to_string(), "m <= f");
        assert_eq!(parts[1].to_string(), "f <= s");
    }

    #[test]
    fn label_references() {
        assert_eq!(
            formula("A & odd(n)"),
            Formula::And(vec![Formula::Label(Ident::new("A")), Formula::Odd(Term::var("n"))])
        );
        // a label name followed by a comparison is a variable
        assert!(matches!(formula("A = 1"), Formula::Cmp(..)));
    }

    #[test]
    fn slices_become_segments() {
        let f = formula("a[m..j] <= r <= a[i..n]");
        assert_eq!(f.to_string(), "seg(a, m, j, <=, r) & seg(a, i, n, >=, r)");
        let f = formula("a[m..i) <= r");
        assert_eq!(f.to_string(), "seg(a, m, i - 1, <=, r)");
        let f = formula("r <= a(j..n]");
        assert_eq!(f.to_string(), "seg(a, j + 1, n, >=, r)");
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        assert!(matches!(formula("(a+b)/2 = r"), Formula::Cmp(Rel::Eq, ..)));
        assert!(matches!(formula("(x = 1 or y = 2) & z > 0"), Formula::And(_)));
        assert!(matches!(formula("!(x < 1)"), Formula::Not(_)));
    }

    #[test]
    fn commands() {
        assert_eq!(command("skip"), Command::Skip);
        assert_eq!(command("++i").to_string(), "i := i + 1");
        assert_eq!(command("--j").to_string(), "j := j - 1");
        assert_eq!(command("*j := f-1").to_string(), "j := f - 1");
        assert_eq!(command("a[i] := 0").to_string(), "a[i] := 0");
        assert!(matches!(command("n != 1"), Command::Guard(_)));
        assert!(matches!(command("r = (a[m]+a[n])/2"), Command::Guard(_)));
        assert!(matches!(command("f := rndm(m, n)"), Command::Choose(..)));
        assert!(matches!(command("swap(a, f, s)"), Command::Swap(..)));
        assert!(matches!(command("print z+a"), Command::Print(_)));
    }

    #[test]
    fn derefs_are_recorded() {
        let toks = lex("*j := f-1", LexOptions::default());
        let labels = HashSet::new();
        let mut c = Cursor::new(&toks, &labels, (1, 1));
        c.command().unwrap();
        assert!(c.derefs.contains("j"));
        assert_eq!(c.seen, vec![Ident::new("j"), Ident::new("f")]);
    }

    #[test]
    fn errors_are_located() {
        let (r, _) = with_cursor("x := ", &[], |c| c.command());
        let e = r.unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        let (r, _) = with_cursor("n0*a0 has been printed", &[], |c| c.formula());
        assert!(r.is_err());
    }
}
