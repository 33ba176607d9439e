use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::diag::Diagnostic;
use crate::model::{
    expand_label_refs, BlockBody, Command, Formula, Ident, LValue, Program, Span, Target,
    Term, Type, HALT, START,
};

/// Structural checks. Errors make a program unfit to run or verify;
/// warnings flag likely incompleteness.
pub fn validate(p: &Program) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let at = |s: Span| (s.line, s.col);
    let err = |out: &mut Vec<Diagnostic>, msg: String, s: Span| {
        let (l, c) = at(s);
        out.push(Diagnostic::error(msg, l, c))
    };
    let warn = |out: &mut Vec<Diagnostic>, msg: String, s: Span| {
        let (l, c) = at(s);
        out.push(Diagnostic::warning(msg, l, c))
    };

    let mut labels = HashSet::new();
    for b in &p.blocks {
        if !labels.insert(b.label.clone()) {
            err(&mut out, format!("duplicate label {}", b.label), b.span);
        }
    }
    let start = p.block(START);
    let halt = p.block(HALT);
    if start.is_none() {
        out.push(Diagnostic::error("missing start label S", 1, 1));
    }
    if halt.is_none() {
        out.push(Diagnostic::error("missing halt label H", 1, 1));
    }

    let mut seen_decl = HashSet::new();
    for d in &p.signature.vars {
        if !seen_decl.insert(d.name.clone()) {
            out.push(Diagnostic::error(format!("variable {} declared twice", d.name), 1, 1));
        }
    }

    for b in &p.blocks {
        if let Err(e) = expand_label_refs(&b.assertion, p) {
            err(&mut out, format!("assertion of {}: {e}", b.label), b.span);
        }
        check_formula(p, &b.assertion, b.span, &mut out);

        if matches!(b.body, BlockBody::Return) && b.label.as_str() != HALT {
            err(
                &mut out,
                format!("label {} has a bare `return`; only H may", b.label),
                b.span,
            );
        }
        for arm in b.arms() {
            check_formula(p, &arm.guard, arm.span, &mut out);
            for c in &arm.body {
                check_command(p, c, arm.span, &mut out);
            }
            match &arm.target {
                Target::Label(l) if !labels.contains(l) => {
                    err(&mut out, format!("undefined label {l}"), arm.span)
                }
                Target::Label(l) if l.as_str() == START => err(
                    &mut out,
                    "goto S: the start label may not have an incoming arc".to_string(),
                    arm.span,
                ),
                _ => {}
            }
            if b.label.as_str() == HALT && arm.target != Target::Return {
                err(
                    &mut out,
                    format!("arm of H goes to {} instead of returning", arm.target),
                    arm.span,
                );
            }
        }
        if matches!(&b.body, BlockBody::Arms(a) if a.is_empty()) && b.label.as_str() != HALT {
            warn(
                &mut out,
                format!("label {} has no arms; arriving there aborts", b.label),
                b.span,
            );
        }
        if !b.arms().is_empty() && !guards_exhaustive(b.arms().iter().map(|a| &a.guard)) {
            warn(
                &mut out,
                format!("guards of {} are not syntactically exhaustive", b.label),
                b.span,
            );
        }
    }

    // incoming arcs and reachability from S
    let mut incoming: HashMap<Ident, usize> = HashMap::new();
    for b in &p.blocks {
        for arm in b.arms() {
            *incoming.entry(Program::target_label(&arm.target)).or_default() += 1;
        }
    }
    let mut reached = HashSet::new();
    let mut queue = VecDeque::new();
    if start.is_some() {
        reached.insert(Ident::new(START));
        queue.push_back(Ident::new(START));
    }
    while let Some(l) = queue.pop_front() {
        if let Some(b) = p.block(l.as_str()) {
            for arm in b.arms() {
                let t = Program::target_label(&arm.target);
                if reached.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    for b in &p.blocks {
        let name = b.label.as_str();
        if name == START {
            continue;
        }
        if name == HALT {
            if !reached.contains(&b.label) {
                warn(&mut out, "H unreachable".to_string(), b.span);
            }
            continue;
        }
        if !incoming.contains_key(&b.label) {
            warn(&mut out, format!("label {name} has no incoming arc"), b.span);
        } else if !reached.contains(&b.label) {
            warn(&mut out, format!("label {name} is unreachable from S"), b.span);
        }
    }
    out
}

fn check_formula(p: &Program, f: &Formula, span: Span, out: &mut Vec<Diagnostic>) {
    let mut vars = BTreeSet::new();
    f.collect_vars(&mut vars);
    check_declared(p, &vars, span, out);
    let mut arrays = BTreeSet::new();
    f.collect_arrays(&mut arrays);
    check_arrays(p, &arrays, span, out);
    let mut refs = Vec::new();
    f.collect_label_refs(&mut refs);
    for r in refs {
        if p.block(r.as_str()).is_none() {
            out.push(Diagnostic::error(
                format!("assertion refers to undefined label {r}"),
                span.line,
                span.col,
            ));
        }
    }
}

fn check_command(p: &Program, c: &Command, span: Span, out: &mut Vec<Diagnostic>) {
    let mut vars = BTreeSet::new();
    c.collect_vars(&mut vars);
    check_declared(p, &vars, span, out);
    let mut arrays = BTreeSet::new();
    match c {
        Command::Guard(f) => f.collect_arrays(&mut arrays),
        Command::Assign(LValue::Index(a, i), t) => {
            arrays.insert(a.clone());
            i.collect_indexed(&mut arrays);
            t.collect_indexed(&mut arrays);
        }
        Command::Assign(_, t) | Command::Print(t) => t.collect_indexed(&mut arrays),
        Command::Swap(a, i, j) => {
            arrays.insert(a.clone());
            i.collect_indexed(&mut arrays);
            j.collect_indexed(&mut arrays);
        }
        Command::Choose(_, lo, hi) => {
            lo.collect_indexed(&mut arrays);
            hi.collect_indexed(&mut arrays);
        }
        Command::Seq(a, b) => {
            check_command(p, a, span, out);
            check_command(p, b, span, out);
            return;
        }
        Command::Skip => {}
    }
    check_arrays(p, &arrays, span, out);
    let mut assigned = BTreeSet::new();
    c.collect_assigned(&mut assigned);
    for v in assigned {
        if p.signature.is_ghost(v.as_str()) {
            out.push(Diagnostic::error(
                format!("ghost variable {v} is assigned"),
                span.line,
                span.col,
            ));
        }
    }
}

fn check_declared(p: &Program, vars: &BTreeSet<Ident>, span: Span, out: &mut Vec<Diagnostic>) {
    for v in vars {
        if p.signature.get(v.as_str()).is_none() {
            out.push(Diagnostic::error(
                format!("undeclared variable {v}"),
                span.line,
                span.col,
            ));
        }
    }
}

fn check_arrays(p: &Program, arrays: &BTreeSet<Ident>, span: Span, out: &mut Vec<Diagnostic>) {
    for a in arrays {
        match p.signature.type_of(a.as_str()) {
            Some(Type::IntArray) | None => {}
            Some(t) => out.push(Diagnostic::error(
                format!("{a} is used as an array but declared {t}"),
                span.line,
                span.col,
            )),
        }
    }
}

/// True when the guards cover every state on syntactic grounds: some guard
/// is `true`, a guard and its negation both occur, `even(t)` and `odd(t)`
/// both occur, or comparisons of one pair of terms cover `<`, `=` and `>`.
pub fn guards_exhaustive<'a>(guards: impl IntoIterator<Item = &'a Formula>) -> bool {
    let guards: Vec<&Formula> = guards.into_iter().collect();
    if guards.iter().any(|g| g.is_true()) {
        return true;
    }
    for g in &guards {
        if let Formula::Not(inner) = g {
            if guards.iter().any(|h| *h == inner.as_ref()) {
                return true;
            }
        }
        if let Formula::Even(t) = g {
            if guards.iter().any(|h| matches!(h, Formula::Odd(u) if u == t)) {
                return true;
            }
        }
    }
    let mut covered: HashMap<(&Term, &Term), [bool; 3]> = HashMap::new();
    for g in &guards {
        if let Formula::Cmp(rel, l, r) = g {
            let (rel, key) = if l <= r { (*rel, (l, r)) } else { (rel.flip(), (r, l)) };
            let cell = covered.entry(key).or_default();
            for (k, ord) in [Ordering::Less, Ordering::Equal, Ordering::Greater]
                .into_iter()
                .enumerate()
            {
                cell[k] |= rel.holds(ord);
            }
        }
    }
    covered.values().any(|c| c.iter().all(|&b| b))
}
