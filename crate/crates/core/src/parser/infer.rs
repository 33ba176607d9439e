use std::collections::BTreeSet;

use crate::model::{Command, Formula, Ident, LValue, Program, Rel, Signature, Term, Type, VarDecl};

/// Signature for a source without `var` lines. Variables keep their order
/// of first occurrence. Anything subscripted, swapped, or passed to an
/// array schema is `int[]`, as is anything compared for equality with an
/// array and the ghost of an array. Everything else is `int`. Names
/// written as `*x` are outputs.
pub fn infer_signature(p: &Program, seen: &[Ident], derefs: &BTreeSet<Ident>) -> Signature {
    let mut arrays = BTreeSet::new();
    let mut equalities = Vec::new();
    for b in &p.blocks {
        b.assertion.collect_arrays(&mut arrays);
        collect_equalities(&b.assertion, &mut equalities);
        for arm in b.arms() {
            arm.guard.collect_arrays(&mut arrays);
            collect_equalities(&arm.guard, &mut equalities);
            for c in &arm.body {
                command_arrays(c, &mut arrays);
                if let Command::Guard(f) = c {
                    collect_equalities(f, &mut equalities);
                }
            }
        }
    }
    loop {
        let before = arrays.len();
        for (x, y) in &equalities {
            if arrays.contains(x) || arrays.contains(y) {
                arrays.insert(x.clone());
                arrays.insert(y.clone());
            }
        }
        for v in seen {
            if v.ghost_base().is_some_and(|b| arrays.contains(b)) {
                arrays.insert(v.clone());
            }
        }
        if arrays.len() == before {
            break;
        }
    }
    Signature {
        vars: seen
            .iter()
            .map(|v| VarDecl {
                name: v.clone(),
                ty: if arrays.contains(v) {
                    Type::IntArray
                } else {
                    Type::Int
                },
                output: derefs.contains(v),
            })
            .collect(),
    }
}

fn collect_equalities(f: &Formula, out: &mut Vec<(Ident, Ident)>) {
    match f {
        Formula::Cmp(Rel::Eq | Rel::Ne, Term::Var(x), Term::Var(y)) => out.push((x.clone(), y.clone())),
        Formula::Not(g) => collect_equalities(g, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| collect_equalities(g, out)),
        _ => {}
    }
}

fn command_arrays(c: &Command, out: &mut BTreeSet<Ident>) {
    match c {
        Command::Guard(f) => f.collect_arrays(out),
        Command::Assign(lv, t) => {
            if let LValue::Index(a, i) = lv {
                out.insert(a.clone());
                i.collect_indexed(out);
            }
            t.collect_indexed(out);
        }
        Command::Choose(_, lo, hi) => {
            lo.collect_indexed(out);
            hi.collect_indexed(out);
        }
        Command::Swap(a, i, j) => {
            out.insert(a.clone());
            i.collect_indexed(out);
            j.collect_indexed(out);
        }
        Command::Print(t) => t.collect_indexed(out),
        Command::Seq(a, b) => {
            command_arrays(a, out);
            command_arrays(b, out);
        }
        Command::Skip => {}
    }
}
