//! Canonical Liffig rendering of terms, formulas and commands.
//!
//! The output reparses to the same tree: parentheses are inserted exactly
//! where precedence or associativity would otherwise change the structure.

use std::fmt::{self, Display, Formatter};

use super::ast::{BinOp, Command, Formula, LValue, Term};

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Bin(op, ..) => op.precedence(),
        Term::Neg(_) => 3,
        _ => 5,
    }
}

fn write_term(f: &mut Formatter<'_>, t: &Term, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Float(x) => write!(f, "{:?}", x.0),
            Term::Var(v) => write!(f, "{v}"),
            Term::Index(a, i) => write!(f, "{a}[{i}]"),
            Term::Neg(t) => {
                f.write_str("-")?;
                // `- -3` would lex as a decrement
                let needs = term_prec(t) < 4 || matches!(**t, Term::Int(_) | Term::Float(_));
                write_term(f, t, needs)
            }
            Term::Bin(BinOp::Pow, l, r) => {
                // `^` does not chain; any compound operand is parenthesized
                write_term(f, l, term_prec(l) < 5 || starts_negative(l))?;
                f.write_str(" ^ ")?;
                write_term(f, r, term_prec(r) < 5 || starts_negative(r))
            }
            Term::Bin(op, l, r) => {
                let p = op.precedence();
                write_term(f, l, term_prec(l) < p)?;
                match op {
                    BinOp::Mod => f.write_str(" mod ")?,
                    _ => write!(f, " {} ", op.symbol())?,
                }
                write_term(f, r, term_prec(r) <= p || starts_negative(r))
            }
        }
    }
}

/// `x - -1` is legal but `x--1` is not; keep a negative right operand
/// parenthesized only when it would otherwise print as `--`.
fn starts_negative(t: &Term) -> bool {
    match t {
        Term::Int(i) => i.to_string().starts_with('-'),
        Term::Float(x) => x.0.is_sign_negative(),
        Term::Neg(_) => true,
        Term::Bin(_, l, _) => starts_negative(l),
        _ => false,
    }
}

fn formula_prec(g: &Formula) -> u8 {
    match g {
        Formula::Or(_) => 0,
        Formula::And(_) => 1,
        _ => 3,
    }
}

fn write_formula(f: &mut Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bool(b) => write!(f, "{b}"),
            Formula::Cmp(rel, l, r) => write!(f, "{l} {} {r}", rel.symbol()),
            Formula::Even(t) => write!(f, "even({t})"),
            Formula::Odd(t) => write!(f, "odd({t})"),
            Formula::Perm(a, b) => write!(f, "perm({a}, {b})"),
            Formula::Seg {
                array,
                lo,
                hi,
                rel,
                bound,
            } => write!(f, "seg({array}, {lo}, {hi}, {}, {bound})", rel.symbol()),
            Formula::Alloc { array, lo, hi } => write!(f, "alloc({array}, {lo}, {hi})"),
            Formula::Printed(t) => write!(f, "printed({t})"),
            Formula::Not(g) => {
                f.write_str("!")?;
                // a bare comparison after `!` would be ambiguous to a reader
                let needs = !matches!(
                    **g,
                    Formula::Bool(_)
                        | Formula::Even(_)
                        | Formula::Odd(_)
                        | Formula::Perm(..)
                        | Formula::Seg { .. }
                        | Formula::Alloc { .. }
                        | Formula::Printed(_)
                        | Formula::Label(_)
                        | Formula::Not(_)
                );
                write_formula(f, g, needs)
            }
            Formula::And(fs) => {
                if fs.is_empty() {
                    return f.write_str("true");
                }
                for (k, g) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" & ")?;
                    }
                    write_formula(f, g, formula_prec(g) <= 1 || fs.len() == 1)?;
                }
                Ok(())
            }
            Formula::Or(fs) => {
                if fs.is_empty() {
                    return f.write_str("false");
                }
                for (k, g) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" or ")?;
                    }
                    write_formula(f, g, formula_prec(g) == 0 || fs.len() == 1)?;
                }
                Ok(())
            }
            Formula::Label(l) => write!(f, "{l}"),
        }
    }
}

impl Display for LValue {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            LValue::Var(v) => write!(f, "{v}"),
            LValue::Index(a, i) => write!(f, "{a}[{i}]"),
        }
    }
}

impl Display for Command {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Command::Skip => f.write_str("skip"),
            Command::Guard(g) => {
                // a guard that is itself a disjunction or conjunction is
                // parenthesized so `;` boundaries stay obvious
                write_formula(f, g, matches!(g, Formula::Or(_) | Formula::And(_)))
            }
            Command::Assign(lv, t) => write!(f, "{lv} := {t}"),
            Command::Choose(v, lo, hi) => write!(f, "{v} := rndm({lo}, {hi})"),
            Command::Swap(a, i, j) => write!(f, "swap({a}, {i}, {j})"),
            Command::Print(t) => write!(f, "print {t}"),
            Command::Seq(a, b) => write!(f, "{a}; {b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ast::{Ident, Rel};

    #[test]
    fn minimal_parentheses() {
        let t = Term::bin(
            BinOp::Div,
            Term::bin(BinOp::Sub, Term::var("n"), Term::int(1)),
            Term::int(2),
        );
        assert_eq!(t.to_string(), "(n - 1) / 2");
        let t = Term::bin(
            BinOp::Sub,
            Term::var("a"),
            Term::bin(BinOp::Sub, Term::var("b"), Term::var("c")),
        );
        assert_eq!(t.to_string(), "a - (b - c)");
        let t = Term::bin(BinOp::Sub, Term::var("a"), Term::int(-1));
        assert_eq!(t.to_string(), "a - (-1)");
        let t = Term::bin(
            BinOp::Mul,
            Term::var("z"),
            Term::bin(BinOp::Pow, Term::var("a"), Term::var("n")),
        );
        assert_eq!(t.to_string(), "z * a ^ n");
        let t = Term::Neg(Box::new(Term::bin(BinOp::Pow, Term::int(-2), Term::var("n"))));
        assert_eq!(t.to_string(), "-(-2) ^ n");
    }

    #[test]
    fn nested_conjunction_is_parenthesized() {
        let a = Formula::And(vec![
            Formula::cmp(Rel::Eq, Term::var("x"), Term::int(1)),
            Formula::cmp(Rel::Gt, Term::var("n"), Term::int(0)),
        ]);
        let b = Formula::And(vec![a, Formula::Odd(Term::var("n"))]);
        assert_eq!(b.to_string(), "(x = 1 & n > 0) & odd(n)");
        let n = Formula::Not(Box::new(Formula::Label(Ident::new("A"))));
        assert_eq!(n.to_string(), "!A");
    }
}
