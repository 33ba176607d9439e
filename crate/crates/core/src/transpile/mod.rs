//! C transcription of Matrix Code in the labeled-goto style: one labeled
//! section per block, one `if (guard) { ...; goto L; }` line per arm and a
//! trailing `assert(0);` under every guarded block.

mod compile;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

pub use compile::{c_compiler, CompileError, CompiledProgram};

use crate::model::{
    expanded_assertion, BinOp, BlockBody, Command, Formula, GuardedArm, Ident, LValue, Program, Rel,
    Target, Term, Type,
};
use crate::parser::{has_errors, validate};

/// How a program variable reaches the C function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    /// A by-value parameter. Arrays decay to pointers, so writes to their
    /// elements are visible to the caller.
    Param,
    /// An `int*` parameter; every use of the variable goes through it.
    Pointer,
    /// A local copied out through the named `int*` parameter on return.
    Result(String),
    Local,
    /// Specification only (ghosts); must not occur in commands.
    Omitted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AssertionStyle {
    /// Each label's assertion as a comment above it.
    #[default]
    Comments,
    /// Additionally `assert(...)` the conjuncts C can express.
    Checks,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspileConfig {
    pub fn_name: String,
    /// Every signature variable in parameter order; parameters come out in
    /// this order and locals are declared in this order.
    pub bindings: Vec<(Ident, Binding)>,
    pub assertions: AssertionStyle,
    /// Called with the value of each `print`.
    pub emit_fn: String,
    /// Prototypes for the helpers the body calls (`swap`, `rndm`, the emit
    /// function) and `#include <assert.h>`.
    pub prelude: bool,
}

impl TranspileConfig {
    /// A reasonable mapping for `p`: variables read at S are parameters,
    /// outputs are pointers, ghosts are omitted and the rest are locals.
    pub fn for_program(p: &Program, fn_name: &str) -> TranspileConfig {
        let inputs = live_at_start(p);
        let bindings = p
            .signature
            .vars
            .iter()
            .map(|d| {
                let b = if p.signature.is_ghost(d.name.as_str()) {
                    Binding::Omitted
                } else if d.output {
                    Binding::Pointer
                } else if inputs.contains(&d.name) || d.ty == Type::IntArray {
                    Binding::Param
                } else {
                    Binding::Local
                };
                (d.name.clone(), b)
            })
            .collect();
        TranspileConfig {
            fn_name: fn_name.to_string(),
            bindings,
            assertions: AssertionStyle::Comments,
            emit_fn: "emit".to_string(),
            prelude: true,
        }
    }

    pub fn binding(&self, v: &str) -> Option<&Binding> {
        self.bindings.iter().find(|(n, _)| n.as_str() == v).map(|(_, b)| b)
    }

    /// Parameters in order, with the variable each one carries.
    pub fn params(&self) -> Vec<(&Ident, &Binding)> {
        self.bindings
            .iter()
            .filter(|(_, b)| matches!(b, Binding::Param | Binding::Pointer | Binding::Result(_)))
            .map(|(v, b)| (v, b))
            .collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranspileError {
    #[error("program is invalid: {0}")]
    Invalid(String),
    #[error("variable `{0}` has no binding in the configuration")]
    Unmapped(String),
    #[error("binding for `{0}`, which the program does not declare")]
    UnknownVariable(String),
    #[error("`{var}` is omitted but used by the command at {label}")]
    OmittedUsed { var: String, label: String },
    #[error("{what} at {label} has no C rendering")]
    Unsupported { what: String, label: String },
}

fn c_type(t: Type) -> &'static str {
    match t {
        Type::Int | Type::IntArray => "int",
        Type::Float => "double",
    }
}

struct Emitter<'a> {
    p: &'a Program,
    cfg: &'a TranspileConfig,
    label: String,
}

impl Emitter<'_> {
    fn unsupported(&self, what: impl Into<String>) -> TranspileError {
        TranspileError::Unsupported {
            what: what.into(),
            label: self.label.clone(),
        }
    }

    fn var(&self, v: &Ident) -> Result<String, TranspileError> {
        match self.cfg.binding(v.as_str()) {
            None => Err(TranspileError::Unmapped(v.to_string())),
            Some(Binding::Omitted) => Err(TranspileError::OmittedUsed {
                var: v.to_string(),
                label: self.label.clone(),
            }),
            // parenthesized so that `x / *p` cannot open a comment
            Some(Binding::Pointer) => Ok(format!("(*{v})")),
            Some(_) => Ok(v.to_string()),
        }
    }

    fn lvalue_var(&self, v: &Ident) -> Result<String, TranspileError> {
        match self.var(v)? {
            s if s.starts_with("(*") => Ok(format!("*{v}")),
            s => Ok(s),
        }
    }

    /// C precedence: 1 additive, 2 multiplicative, 3 unary, 4 primary.
    fn term(&self, t: &Term) -> Result<(String, u8), TranspileError> {
        Ok(match t {
            Term::Int(i) => {
                let s = i.to_string();
                let p = if s.starts_with('-') { 3 } else { 4 };
                (s, p)
            }
            Term::Float(x) => (format!("{:?}", x.0), if x.0.is_sign_negative() { 3 } else { 4 }),
            Term::Var(v) => (self.var(v)?, 4),
            Term::Index(a, i) => (format!("{}[{}]", self.var(a)?, self.term(i)?.0), 4),
            Term::Neg(u) => {
                let (s, p) = self.term(u)?;
                // `--x` would be a decrement
                if p < 4 || s.starts_with('-') {
                    (format!("-({s})"), 3)
                } else {
                    (format!("-{s}"), 3)
                }
            }
            Term::Bin(BinOp::Pow, ..) => return Err(self.unsupported(format!("power `{t}`"))),
            Term::Bin(op, l, r) => {
                let prec = match op {
                    BinOp::Add | BinOp::Sub => 1,
                    _ => 2,
                };
                let sym = match op {
                    BinOp::Mod => "%",
                    other => other.symbol(),
                };
                let (ls, lp) = self.term(l)?;
                let (rs, rp) = self.term(r)?;
                let ls = if lp < prec { format!("({ls})") } else { ls };
                let rs = if rp <= prec || rs.starts_with('-') { format!("({rs})") } else { rs };
                (format!("{ls}{sym}{rs}"), prec)
            }
        })
    }

    fn expr(&self, t: &Term) -> Result<String, TranspileError> {
        Ok(self.term(t)?.0)
    }

    /// C precedence: 0 `||`, 1 `&&`, 2 relational or tighter.
    fn formula(&self, f: &Formula) -> Result<(String, u8), TranspileError> {
        let parity = |t: &Term, rel: &str| -> Result<(String, u8), TranspileError> {
            let (s, p) = self.term(t)?;
            let s = if p < 2 { format!("({s})") } else { s };
            Ok((format!("{s} % 2 {rel} 0"), 2))
        };
        Ok(match f {
            Formula::Bool(b) => (if *b { "1" } else { "0" }.to_string(), 2),
            Formula::Cmp(rel, l, r) => {
                let sym = match rel {
                    Rel::Eq => "==",
                    other => other.symbol(),
                };
                (format!("{} {sym} {}", self.expr(l)?, self.expr(r)?), 2)
            }
            Formula::Even(t) => parity(t, "==")?,
            Formula::Odd(t) => parity(t, "!=")?,
            Formula::Not(g) => (format!("!({})", self.formula(g)?.0), 2),
            Formula::And(fs) | Formula::Or(fs) => {
                let (sep, prec) = if matches!(f, Formula::And(_)) { (" && ", 1) } else { (" || ", 0) };
                let parts = fs
                    .iter()
                    .map(|g| {
                        let (s, p) = self.formula(g)?;
                        Ok(if p < prec { format!("({s})") } else { s })
                    })
                    .collect::<Result<Vec<_>, TranspileError>>()?;
                (parts.join(sep), prec)
            }
            other => return Err(self.unsupported(format!("formula `{other}`"))),
        })
    }

    fn statement(&self, c: &Command, out: &mut Vec<String>) -> Result<(), TranspileError> {
        match c {
            Command::Skip => {}
            Command::Seq(a, b) => {
                self.statement(a, out)?;
                self.statement(b, out)?;
            }
            Command::Guard(g) => return Err(self.unsupported(format!("guard `{g}` inside an arm body"))),
            Command::Assign(LValue::Var(v), t) => {
                let lhs = self.lvalue_var(v)?;
                let step = match t {
                    Term::Bin(BinOp::Add, l, r) if matches!(&**l, Term::Var(x) if x == v) && is_one(r) => Some("++"),
                    Term::Bin(BinOp::Sub, l, r) if matches!(&**l, Term::Var(x) if x == v) && is_one(r) => Some("--"),
                    _ => None,
                };
                match step {
                    Some(op) => out.push(format!("{op}{lhs};")),
                    None => out.push(format!("{lhs} = {};", self.expr(t)?)),
                }
            }
            Command::Assign(LValue::Index(a, i), t) => {
                out.push(format!("{}[{}] = {};", self.var(a)?, self.expr(i)?, self.expr(t)?))
            }
            Command::Choose(v, lo, hi) => {
                out.push(format!("{} = rndm({}, {});", self.lvalue_var(v)?, self.expr(lo)?, self.expr(hi)?))
            }
            Command::Swap(a, i, j) => out.push(format!("swap({}, {}, {});", self.var(a)?, self.expr(i)?, self.expr(j)?)),
            Command::Print(t) => out.push(format!("{}({});", self.cfg.emit_fn, self.expr(t)?)),
        }
        Ok(())
    }

    fn exit(&self, out: &mut Vec<String>) -> Result<(), TranspileError> {
        for (v, b) in &self.cfg.bindings {
            if let Binding::Result(ptr) = b {
                out.push(format!("*{ptr} = {};", self.var(v)?));
            }
        }
        out.push("return;".to_string());
        Ok(())
    }

    /// The arm's statements, ending in its jump.
    fn arm_body(&self, arm: &GuardedArm) -> Result<Vec<String>, TranspileError> {
        let mut out = Vec::new();
        for c in &arm.body {
            self.statement(c, &mut out)?;
        }
        match &arm.target {
            Target::Label(l) => out.push(format!("goto {l};")),
            Target::Return => self.exit(&mut out)?,
        }
        Ok(out)
    }

    /// The executable part of the label's assertion, and what was left out.
    fn check(&self) -> Result<(Option<String>, Vec<String>), TranspileError> {
        let f = expanded_assertion(self.p, &self.label).map_err(|e| TranspileError::Invalid(e.to_string()))?;
        let mut kept = Vec::new();
        let mut skipped = Vec::new();
        for c in f.conjuncts() {
            match self.formula(c) {
                Ok((s, p)) => kept.push(if p < 1 { format!("({s})") } else { s }),
                Err(_) => skipped.push(c.to_string()),
            }
        }
        let check = (!kept.is_empty()).then(|| format!("assert({});", kept.join(" && ")));
        Ok((check, skipped))
    }
}

/// Variables some path from S may read before writing.
fn live_at_start(p: &Program) -> BTreeSet<Ident> {
    let mut live: BTreeMap<Ident, BTreeSet<Ident>> = p.labels().into_iter().map(|l| (l, BTreeSet::new())).collect();
    loop {
        let mut changed = false;
        for b in &p.blocks {
            let mut here = BTreeSet::new();
            for arm in b.arms() {
                let c = arm.command();
                here.extend(c.live_in());
                if let Target::Label(t) = &arm.target {
                    let defined = c.definitely_defined();
                    here.extend(live.get(t).into_iter().flatten().filter(|v| !defined.contains(*v)).cloned());
                }
            }
            let slot = live.get_mut(&b.label).expect("every label has a slot");
            if here.len() > slot.len() {
                *slot = here;
                changed = true;
            }
        }
        if !changed {
            return live.remove(&Ident::new(crate::model::START)).unwrap_or_default();
        }
    }
}

fn is_one(t: &Term) -> bool {
    matches!(t, Term::Int(i) if *i == crate::model::Int::from(1))
}

/// Transcribe `p` into the body of a C function. Blocks keep their source
/// order; guards are tested in textual order, first match wins.
pub fn transpile(p: &Program, cfg: &TranspileConfig) -> Result<String, TranspileError> {
    let diags = validate(p);
    if has_errors(&diags) {
        let first = diags.iter().find(|d| d.is_error()).map(|d| d.to_string()).unwrap_or_default();
        return Err(TranspileError::Invalid(first));
    }
    for (v, _) in &cfg.bindings {
        if p.signature.get(v.as_str()).is_none() {
            return Err(TranspileError::UnknownVariable(v.to_string()));
        }
    }
    for d in &p.signature.vars {
        if cfg.binding(d.name.as_str()).is_none() {
            return Err(TranspileError::Unmapped(d.name.to_string()));
        }
    }
    let ty = |v: &Ident| p.signature.type_of(v.as_str()).unwrap_or(Type::Int);

    let mut e = Emitter {
        p,
        cfg,
        label: String::new(),
    };
    let mut sections = Vec::new();
    let mut used = BTreeSet::new();
    for b in &p.blocks {
        e.label = b.label.to_string();
        let pad = " ".repeat(e.label.len() + 2);
        let mut lines = Vec::new();
        match cfg.assertions {
            AssertionStyle::Comments => {
                if !b.assertion.is_true() {
                    lines.push(format!("/* {}: {} */", b.label, b.assertion));
                }
            }
            AssertionStyle::Checks => {
                let (check, skipped) = e.check()?;
                if !skipped.is_empty() {
                    lines.push(format!("/* {}: not checked: {} */", b.label, skipped.join(" & ")));
                }
                if let Some(c) = check {
                    lines.push(format!("{}: {c}", b.label));
                    used.insert("assert");
                }
            }
        }
        let labeled = lines.iter().any(|l| l.starts_with(&format!("{}:", b.label)));
        let mut body: Vec<String> = Vec::new();
        match &b.body {
            BlockBody::Return => {
                let mut out = Vec::new();
                e.exit(&mut out)?;
                body.push(out.join(" "));
            }
            BlockBody::Arms(arms) if arms.len() == 1 && arms[0].guard.is_true() => {
                body.push(e.arm_body(&arms[0])?.join(" "));
            }
            BlockBody::Arms(arms) => {
                for arm in arms {
                    let guard = e.formula(&arm.guard)?.0;
                    body.push(format!("if ({guard}) {{ {} }}", e.arm_body(arm)?.join(" ")));
                }
                body.push("assert(0);".to_string());
                used.insert("assert");
            }
        }
        for (k, line) in body.into_iter().enumerate() {
            if k == 0 && !labeled {
                lines.push(format!("{}: {line}", b.label));
            } else {
                lines.push(format!("{pad}{line}"));
            }
        }
        sections.push(lines);
    }

    let mut src = String::new();
    if cfg.prelude {
        let text: String = sections.iter().flatten().cloned().collect::<Vec<_>>().join("\n");
        if used.contains("assert") {
            src.push_str("#include <assert.h>\n");
        }
        if text.contains("swap(") {
            src.push_str("void swap(int a[], int i, int j);\n");
        }
        if text.contains("rndm(") {
            src.push_str("int rndm(int lo, int hi);\n");
        }
        if text.contains(&format!("{}(", cfg.emit_fn)) {
            let _ = writeln!(src, "void {}(double v);", cfg.emit_fn);
        }
        if !src.is_empty() {
            src.push('\n');
        }
    }

    let params: Vec<String> = cfg
        .params()
        .into_iter()
        .map(|(v, b)| match b {
            Binding::Param if ty(v) == Type::IntArray => format!("int {v}[]"),
            Binding::Param => format!("{} {v}", c_type(ty(v))),
            Binding::Pointer => format!("{}* {v}", c_type(ty(v))),
            Binding::Result(ptr) => format!("{}* {ptr}", c_type(ty(v))),
            _ => unreachable!("params() yields parameters only"),
        })
        .collect();
    let _ = writeln!(src, "void {}({}){{", cfg.fn_name, params.join(", "));

    // plain locals first, then the ones copied out on return; one
    // declaration per type in each group
    let mut decls = Vec::new();
    for results in [false, true] {
        let mut by_type: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        let mut order = Vec::new();
        for (v, b) in &cfg.bindings {
            let hit = match b {
                Binding::Local => !results,
                Binding::Result(_) => results,
                _ => false,
            };
            if !hit {
                continue;
            }
            if ty(v) == Type::IntArray {
                e.label = v.to_string();
                return Err(e.unsupported("a local array"));
            }
            let t = c_type(ty(v));
            if !by_type.contains_key(t) {
                order.push(t);
            }
            by_type.entry(t).or_default().push(v.to_string());
        }
        for t in order {
            decls.push(format!("{t} {};", by_type[t].join(",")));
        }
    }
    if !decls.is_empty() {
        let _ = writeln!(src, "  {}", decls.join(" "));
    }
    for line in sections.iter().flatten() {
        src.push_str(line);
        src.push('\n');
    }
    src.push_str("}\n");
    Ok(src)
}

/// `src` without comments, blank lines or whitespace, one entry per line.
/// Two transcriptions with equal normal forms match line for line.
pub fn normal_lines(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut in_block = false;
    for line in src.lines() {
        let mut kept = String::new();
        let mut rest = line;
        loop {
            if in_block {
                match rest.find("*/") {
                    Some(k) => {
                        rest = &rest[k + 2..];
                        in_block = false;
                    }
                    None => break,
                }
            } else {
                let block = rest.find("/*");
                let line_c = rest.find("//");
                match (block, line_c) {
                    (Some(b), l) if l.map_or(true, |l| b < l) => {
                        kept.push_str(&rest[..b]);
                        rest = &rest[b + 2..];
                        in_block = true;
                    }
                    (_, Some(l)) => {
                        kept.push_str(&rest[..l]);
                        break;
                    }
                    _ => {
                        kept.push_str(rest);
                        break;
                    }
                }
            }
        }
        let squeezed: String = kept.chars().filter(|c| !c.is_whitespace()).collect();
        if !squeezed.is_empty() {
            out.push(squeezed);
        }
    }
    out
}

/// The definition of function `name` in `src`: from its header to the
/// first line that is a lone `}`.
pub fn function_text<'a>(src: &'a str, name: &str) -> Option<&'a str> {
    let start = src.find(&format!("void {name}("))?;
    let rest = &src[start..];
    let mut end = 0;
    for line in rest.split_inclusive('\n') {
        end += line.len();
        if line.trim_end() == "}" {
            return Some(&rest[..end]);
        }
    }
    None
}

/// One labeled section of a transcription, normalized: the label and the
/// statements under it, with braces dropped so that `if (c) goto L;` and
/// `if (c) { goto L; }` compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub label: String,
    pub lines: Vec<String>,
}

/// Labeled sections of a function body, in order. Text before the first
/// label is dropped.
pub fn sections(src: &str) -> Vec<Section> {
    let mut out: Vec<Section> = Vec::new();
    for line in normal_lines(src) {
        let line: String = line.chars().filter(|c| *c != '{' && *c != '}').collect();
        // `L:` at the front, but not `::` or a ternary
        let label = line
            .find(':')
            .filter(|&k| k > 0 && line[..k].chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        match label {
            Some(k) => {
                let rest = line[k + 1..].to_string();
                out.push(Section {
                    label: line[..k].to_string(),
                    lines: if rest.is_empty() { Vec::new() } else { vec![rest] },
                });
            }
            None => {
                if let Some(s) = out.last_mut() {
                    if !line.is_empty() {
                        s.lines.push(line);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::sources;
    use crate::parser::{ParseOptions, SourceFile};

    fn program(src: &str) -> Program {
        SourceFile::detect(src).parse(ParseOptions::default()).unwrap().program
    }

    fn fh_config(p: &Program) -> TranspileConfig {
        let mut cfg = TranspileConfig::for_program(p, "partition");
        let order = ["a", "i", "j", "m", "n", "r", "a0"];
        cfg.bindings = order
            .iter()
            .map(|v| {
                let b = match *v {
                    "a" | "m" | "n" => Binding::Param,
                    "i" => Binding::Result("Ip".into()),
                    "j" => Binding::Result("Jp".into()),
                    "a0" => Binding::Omitted,
                    _ => Binding::Local,
                };
                (Ident::new(v), b)
            })
            .collect();
        cfg
    }

    #[test]
    fn terms_get_minimal_parentheses() {
        let p = program("var x: int\nvar y: int\nS: true\n  if true -> x := (x + y) / 2 - (y - 1); y := -(x - 1); goto H\n  fi\nH: true\n  return\n");
        let cfg = TranspileConfig::for_program(&p, "f");
        let c = transpile(&p, &cfg).unwrap();
        assert!(c.contains("x = (x+y)/2-(y-1);"), "{c}");
        assert!(c.contains("y = -(x-1);"), "{c}");
    }

    #[test]
    fn increments_and_pointer_outputs() {
        let p = program("var n: int\nvar k: int output\nS: true\n  if true -> goto L\n  fi\nL: true\n  if n > 0 -> n := n - 1; k := k + 1; goto L\n   | n <= 0 -> return\n  fi\nH: true\n  return\n");
        let cfg = TranspileConfig::for_program(&p, "count");
        let c = transpile(&p, &cfg).unwrap();
        assert!(c.contains("void count(int n, int* k){"), "{c}");
        assert!(c.contains("if (n > 0) { --n; ++*k; goto L; }"), "{c}");
        assert!(c.contains("if (n <= 0) { return; }"), "{c}");
        assert!(c.contains("assert(0);"));
    }

    #[test]
    fn empty_program_has_only_the_return_block() {
        let p = program("S: true\n  if\n  fi\nH: true\n  return\n");
        let cfg = TranspileConfig::for_program(&p, "nothing");
        let c = transpile(&p, &cfg).unwrap();
        let secs = sections(&c);
        let h = secs.iter().find(|s| s.label == "H").unwrap();
        assert_eq!(h.lines, ["return;"]);
        assert_eq!(c.matches("return;").count(), 1);
    }

    #[test]
    fn unmapped_and_omitted_variables_are_errors() {
        let p = program(sources::FH_PARTITION);
        let mut cfg = fh_config(&p);
        cfg.bindings.retain(|(v, _)| v.as_str() != "r");
        assert_eq!(transpile(&p, &cfg), Err(TranspileError::Unmapped("r".into())));
        let mut cfg = fh_config(&p);
        cfg.bindings[2].1 = Binding::Omitted;
        assert!(matches!(transpile(&p, &cfg), Err(TranspileError::OmittedUsed { .. })));
    }

    #[test]
    fn power_has_no_c_rendering() {
        let p = program(sources::FASTEXP);
        let cfg = TranspileConfig::for_program(&p, "fastexp");
        // only assertions use `^`, and they are comments
        assert!(transpile(&p, &cfg).is_ok());
        let q = program("var x: int\nS: true\n  if true -> x := x ^ 2; goto H\n  fi\nH: true\n  return\n");
        let err = transpile(&q, &TranspileConfig::for_program(&q, "f")).unwrap_err();
        assert!(matches!(err, TranspileError::Unsupported { .. }));
    }

    #[test]
    fn fh_matches_the_published_c_line_for_line() {
        let p = program(sources::FH_PARTITION);
        let c = transpile(&p, &fh_config(&p)).unwrap();
        let ours = function_text(&c, "partition").unwrap();
        let theirs = function_text(sources::published::FH_C, "partition").unwrap();
        assert_eq!(normal_lines(ours), normal_lines(theirs), "\n{ours}");
    }

    #[test]
    fn checks_keep_the_expressible_conjuncts() {
        let p = program(sources::FH_PARTITION);
        let mut cfg = fh_config(&p);
        cfg.assertions = AssertionStyle::Checks;
        let c = transpile(&p, &cfg).unwrap();
        assert!(c.contains("S: assert(m < n);"), "{c}");
        assert!(c.contains("not checked: perm(a, a0)"), "{c}");
    }

    #[test]
    fn comments_do_not_disturb_sections() {
        let s = sections("void f(){\n  int x;\nA: /* c\n d */ if (x == 1) goto B; // tail\n   assert(0);\nB: return;\n}\n");
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].lines, ["if(x==1)gotoB;", "assert(0);"]);
        assert_eq!(s[1].lines, ["return;"]);
    }
}
