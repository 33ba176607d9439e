//! Abstract syntax of Matrix Code programs.
//!
//! A program is a signature, one assertion per label, and per label an
//! ordered list of guarded arms. Each arm reads as the triple
//! `{P} guard; body {Q}`.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::int::Int;

/// Variable or label name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: &str) -> Ident {
        Ident(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `n0` is the ghost snapshot of `n`. Returns the base name.
    pub fn ghost_base(&self) -> Option<&str> {
        let s = self.as_str();
        if s.len() > 1 && s.ends_with('0') {
            Some(&s[..s.len() - 1])
        } else {
            None
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

impl Borrow<str> for Ident {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Ident {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// Source location. Ignored by equality, ordering and hashing so that
/// reparsed programs compare structurally.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Span {}
impl PartialOrd for Span {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Span {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}
impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// A float literal with total ordering so that commands can live in sets.
#[derive(Clone, Copy, Debug)]
pub struct FloatLit(pub f64);

impl PartialEq for FloatLit {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}
impl Eq for FloatLit {}
impl PartialOrd for FloatLit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FloatLit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}
impl Hash for FloatLit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Type {
    Int,
    Float,
    #[serde(rename = "int[]")]
    IntArray,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Int => "int",
            Type::Float => "float",
            Type::IntArray => "int[]",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    /// Integer power with a nonnegative exponent.
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "mod",
            BinOp::Pow => "^",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    /// The relation with operands exchanged: `x < y` iff `y > x`.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Eq => Rel::Eq,
            Rel::Ne => Rel::Ne,
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
        }
    }

    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Rel::Eq => ord == Ordering::Equal,
            Rel::Ne => ord != Ordering::Equal,
            Rel::Lt => ord == Ordering::Less,
            Rel::Le => ord != Ordering::Greater,
            Rel::Gt => ord == Ordering::Greater,
            Rel::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(Int),
    Float(FloatLit),
    Var(Ident),
    Index(Ident, Box<Term>),
    Neg(Box<Term>),
    Bin(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Ident::new(name))
    }

    pub fn int(v: i64) -> Term {
        Term::Int(Int::from(v))
    }

    pub fn bin(op: BinOp, l: Term, r: Term) -> Term {
        Term::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn index(array: &str, i: Term) -> Term {
        Term::Index(Ident::new(array), Box::new(i))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Term::Int(_) | Term::Float(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Index(a, i) => {
                out.insert(a.clone());
                i.collect_vars(out);
            }
            Term::Neg(t) => t.collect_vars(out),
            Term::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Variables used with a subscript (hence arrays).
    pub fn collect_indexed(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Term::Index(a, i) => {
                out.insert(a.clone());
                i.collect_indexed(out);
            }
            Term::Neg(t) => t.collect_indexed(out),
            Term::Bin(_, l, r) => {
                l.collect_indexed(out);
                r.collect_indexed(out);
            }
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<Ident> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bool(bool),
    Cmp(Rel, Term, Term),
    Even(Term),
    Odd(Term),
    /// `perm(a, b)`: the contents of `a` are a permutation of those of `b`.
    Perm(Ident, Ident),
    /// `seg(a, lo, hi, rel, t)`: every `a[k]` with `lo <= k <= hi` satisfies `a[k] rel t`.
    Seg {
        array: Ident,
        lo: Term,
        hi: Term,
        rel: Rel,
        bound: Term,
    },
    /// `alloc(a, lo, hi)`: `a[lo..hi]` is a segment of `a`, possibly empty:
    /// `a.lo <= lo <= hi + 1 <= a.hi + 1`.
    Alloc { array: Ident, lo: Term, hi: Term },
    /// `printed(t)`: the value of `t` occurs in the output stream.
    Printed(Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    /// Reference to another label's assertion.
    Label(Ident),
}

impl Formula {
    pub fn cmp(rel: Rel, l: Term, r: Term) -> Formula {
        Formula::Cmp(rel, l, r)
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::Bool(true))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Formula::Bool(_) | Formula::Label(_) => {}
            Formula::Cmp(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Even(t) | Formula::Odd(t) | Formula::Printed(t) => t.collect_vars(out),
            Formula::Perm(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Seg {
                array,
                lo,
                hi,
                bound,
                ..
            } => {
                out.insert(array.clone());
                lo.collect_vars(out);
                hi.collect_vars(out);
                bound.collect_vars(out);
            }
            Formula::Alloc { array, lo, hi } => {
                out.insert(array.clone());
                lo.collect_vars(out);
                hi.collect_vars(out);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Ident> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    /// Names that must be arrays for the formula to be well typed.
    pub fn collect_arrays(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Formula::Cmp(_, l, r) => {
                l.collect_indexed(out);
                r.collect_indexed(out);
            }
            Formula::Even(t) | Formula::Odd(t) | Formula::Printed(t) => t.collect_indexed(out),
            Formula::Perm(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Seg {
                array,
                lo,
                hi,
                bound,
                ..
            } => {
                out.insert(array.clone());
                lo.collect_indexed(out);
                hi.collect_indexed(out);
                bound.collect_indexed(out);
            }
            Formula::Alloc { array, lo, hi } => {
                out.insert(array.clone());
                lo.collect_indexed(out);
                hi.collect_indexed(out);
            }
            Formula::Not(f) => f.collect_arrays(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_arrays(out)),
            Formula::Bool(_) | Formula::Label(_) => {}
        }
    }

    pub fn collect_label_refs(&self, out: &mut Vec<Ident>) {
        match self {
            Formula::Label(l) => out.push(l.clone()),
            Formula::Not(f) => f.collect_label_refs(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_label_refs(out)),
            _ => {}
        }
    }

    pub fn has_label_refs(&self) -> bool {
        let mut v = Vec::new();
        self.collect_label_refs(&mut v);
        !v.is_empty()
    }

    /// Top-level conjuncts, flattening nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(fs) => fs.iter().for_each(|g| walk(g, out)),
                Formula::Bool(true) => {}
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// True when the formula (or any part of it) uses a schema that cannot be
    /// rendered as a C expression.
    pub fn uses_schemas(&self) -> bool {
        match self {
            Formula::Perm(..)
            | Formula::Seg { .. }
            | Formula::Alloc { .. }
            | Formula::Printed(_)
            | Formula::Label(_) => true,
            Formula::Not(f) => f.uses_schemas(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(Formula::uses_schemas),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LValue {
    Var(Ident),
    Index(Ident, Term),
}

impl LValue {
    pub fn name(&self) -> &Ident {
        match self {
            LValue::Var(v) | LValue::Index(v, _) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Skip,
    /// A formula used as a command: the identity restricted to states where it holds.
    Guard(Formula),
    Assign(LValue, Term),
    /// `x := rndm(lo, hi)`: any integer in `lo..=hi`.
    Choose(Ident, Term, Term),
    Swap(Ident, Term, Term),
    Print(Term),
    Seq(Box<Command>, Box<Command>),
}

impl Command {
    pub fn seq(a: Command, b: Command) -> Command {
        Command::Seq(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence of the given commands; `Skip` when empty.
    pub fn sequence<I: IntoIterator<Item = Command>>(cmds: I) -> Command {
        let mut v: Vec<Command> = cmds.into_iter().collect();
        match v.pop() {
            None => Command::Skip,
            Some(last) => v.into_iter().rev().fold(last, |acc, c| Command::seq(c, acc)),
        }
    }

    /// The primitive commands in execution order.
    pub fn flatten(&self) -> Vec<&Command> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Command, out: &mut Vec<&'a Command>) {
            match c {
                Command::Seq(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Drop `skip` and `true` guards wherever they are units of `;`.
    pub fn simplify(&self) -> Command {
        let parts: Vec<Command> = self
            .flatten()
            .into_iter()
            .filter(|c| !matches!(c, Command::Skip | Command::Guard(Formula::Bool(true))))
            .cloned()
            .collect();
        Command::sequence(parts)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Command::Skip => {}
            Command::Guard(f) => f.collect_vars(out),
            Command::Assign(lv, t) => {
                out.insert(lv.name().clone());
                if let LValue::Index(_, i) = lv {
                    i.collect_vars(out);
                }
                t.collect_vars(out);
            }
            Command::Choose(v, lo, hi) => {
                out.insert(v.clone());
                lo.collect_vars(out);
                hi.collect_vars(out);
            }
            Command::Swap(a, i, j) => {
                out.insert(a.clone());
                i.collect_vars(out);
                j.collect_vars(out);
            }
            Command::Print(t) => t.collect_vars(out),
            Command::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Variables whose whole value is (re)assigned.
    pub fn collect_assigned(&self, out: &mut BTreeSet<Ident>) {
        for c in self.flatten() {
            match c {
                Command::Assign(lv, _) => {
                    out.insert(lv.name().clone());
                }
                Command::Choose(v, ..) | Command::Swap(v, ..) => {
                    out.insert(v.clone());
                }
                _ => {}
            }
        }
    }

    /// Variables that may be read before being overwritten as a whole.
    pub fn live_in(&self) -> BTreeSet<Ident> {
        let mut defined = BTreeSet::new();
        let mut live = BTreeSet::new();
        let mut read = |vars: BTreeSet<Ident>, defined: &BTreeSet<Ident>| {
            for v in vars {
                if !defined.contains(&v) {
                    live.insert(v);
                }
            }
        };
        for c in self.flatten() {
            match c {
                Command::Skip => {}
                Command::Guard(f) => read(f.vars(), &defined),
                Command::Print(t) => read(t.vars(), &defined),
                Command::Assign(LValue::Var(v), t) => {
                    read(t.vars(), &defined);
                    defined.insert(v.clone());
                }
                Command::Assign(LValue::Index(a, i), t) => {
                    let mut vs = t.vars();
                    i.collect_vars(&mut vs);
                    vs.insert(a.clone());
                    read(vs, &defined);
                }
                Command::Choose(v, lo, hi) => {
                    let mut vs = lo.vars();
                    hi.collect_vars(&mut vs);
                    read(vs, &defined);
                    defined.insert(v.clone());
                }
                Command::Swap(a, i, j) => {
                    let mut vs = i.vars();
                    j.collect_vars(&mut vs);
                    vs.insert(a.clone());
                    read(vs, &defined);
                }
                Command::Seq(..) => unreachable!("flattened"),
            }
        }
        live
    }

    /// Variables overwritten as a whole on every execution.
    pub fn definitely_defined(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        for c in self.flatten() {
            match c {
                Command::Assign(LValue::Var(v), _) | Command::Choose(v, ..) => {
                    out.insert(v.clone());
                }
                _ => {}
            }
        }
        out
    }

    pub fn uses_print(&self) -> bool {
        self.flatten().iter().any(|c| matches!(c, Command::Print(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Target {
    Label(Ident),
    Return,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Label(l) => write!(f, "{l}"),
            Target::Return => f.write_str("RETURN"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GuardedArm {
    pub guard: Formula,
    /// Primitive commands in textual order; empty means no body.
    pub body: Vec<Command>,
    pub target: Target,
    pub span: Span,
}

impl GuardedArm {
    pub fn new(guard: Formula, body: Vec<Command>, target: Target) -> Self {
        GuardedArm {
            guard,
            body,
            target,
            span: Span::default(),
        }
    }

    /// The arm as a single command: its guard (omitted when `true`) followed
    /// by its body.
    pub fn command(&self) -> Command {
        let mut parts = Vec::with_capacity(self.body.len() + 1);
        if !self.guard.is_true() {
            parts.push(Command::Guard(self.guard.clone()));
        }
        parts.extend(self.body.iter().cloned());
        Command::sequence(parts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlockBody {
    /// Bare `return`: arriving here halts. Only valid for the halt label.
    Return,
    Arms(Vec<GuardedArm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelBlock {
    pub label: Ident,
    pub assertion: Formula,
    /// Prose that accompanied the assertion in the source, if any.
    pub doc: Option<String>,
    pub body: BlockBody,
    pub span: Span,
}

impl LabelBlock {
    pub fn arms(&self) -> &[GuardedArm] {
        match &self.body {
            BlockBody::Return => &[],
            BlockBody::Arms(a) => a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VarDecl {
    pub name: Ident,
    pub ty: Type,
    pub output: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub vars: Vec<VarDecl>,
}

impl Signature {
    pub fn get(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|d| d.name.as_str() == name)
    }

    pub fn type_of(&self, name: &str) -> Option<Type> {
        self.get(name).map(|d| d.ty)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|d| d.name.as_str() == name)
    }

    /// Declared ghosts paired with their declared base variable.
    pub fn ghosts(&self) -> Vec<(Ident, Ident)> {
        self.vars
            .iter()
            .filter_map(|d| {
                let base = d.name.ghost_base()?;
                self.get(base).map(|b| (d.name.clone(), b.name.clone()))
            })
            .collect()
    }

    pub fn is_ghost(&self, name: &str) -> bool {
        Ident::new(name)
            .ghost_base()
            .is_some_and(|b| self.get(b).is_some())
    }
}

pub const START: &str = "S";
pub const HALT: &str = "H";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub signature: Signature,
    /// Blocks in source order.
    pub blocks: Vec<LabelBlock>,
}

impl Program {
    pub fn block(&self, label: &str) -> Option<&LabelBlock> {
        self.blocks.iter().find(|b| b.label.as_str() == label)
    }

    pub fn labels(&self) -> Vec<Ident> {
        self.blocks.iter().map(|b| b.label.clone()).collect()
    }

    pub fn arm_count(&self) -> usize {
        self.blocks.iter().map(|b| b.arms().len()).sum()
    }

    pub fn arms(&self) -> impl Iterator<Item = (&LabelBlock, usize, &GuardedArm)> {
        self.blocks
            .iter()
            .flat_map(|b| b.arms().iter().enumerate().map(move |(k, a)| (b, k, a)))
    }

    /// The label whose assertion governs arrival at `target`.
    pub fn target_label(target: &Target) -> Ident {
        match target {
            Target::Label(l) => l.clone(),
            Target::Return => Ident::new(HALT),
        }
    }

    pub fn output_vars(&self) -> Vec<Ident> {
        self.signature
            .vars
            .iter()
            .filter(|d| d.output)
            .map(|d| d.name.clone())
            .collect()
    }

    /// Every float-typed variable retyped as `int`. Bounded verification
    /// works on this instantiation.
    pub fn int_instantiation(&self) -> Program {
        let mut p = self.clone();
        for d in &mut p.signature.vars {
            if d.ty == Type::Float {
                d.ty = Type::Int;
            }
        }
        p
    }

    pub fn has_float_vars(&self) -> bool {
        self.signature.vars.iter().any(|d| d.ty == Type::Float)
    }
}

/// One verification condition `{pre} command {post}` for a single arm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VerificationCondition {
    pub pre_label: Ident,
    /// Index of the arm within the pre-label's block.
    pub arm: usize,
    pub pre: Formula,
    pub command: Command,
    pub post_label: Ident,
    pub post: Formula,
    pub span: Span,
}

impl VerificationCondition {
    /// Stable identifier `P->Q#k` (k = arm index within P).
    pub fn id(&self) -> String {
        format!("{}->{}#{}", self.pre_label, self.post_label, self.arm)
    }
}

impl fmt::Display for VerificationCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} {} {{{}}}", self.pre_label, self.command, self.post_label)
    }
}
