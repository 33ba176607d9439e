use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use super::domain::{Domain, Mode, StateSpace};
use crate::interp::{eval_formula, successors};
use crate::model::{
    expanded_assertion, ExpandError, Formula, Ident, Program, Signature, State, Type,
    VerificationCondition,
};

/// One VC per guarded arm: `{P} guard; body {Q}`, where Q is the arm's
/// target and a `return` arm targets H. Assertions are expanded.
pub fn extract_vcs(p: &Program) -> Result<Vec<VerificationCondition>, ExpandError> {
    let mut out = Vec::new();
    for (block, k, arm) in p.arms() {
        let post_label = Program::target_label(&arm.target);
        out.push(VerificationCondition {
            pre_label: block.label.clone(),
            arm: k,
            pre: expanded_assertion(p, block.label.as_str())?,
            command: arm.command(),
            post: expanded_assertion(p, post_label.as_str())?,
            post_label,
            span: arm.span,
        });
    }
    Ok(out)
}

/// Variables a pre-state must bind: those of the precondition, those the
/// command may read before writing, and those of the postcondition the
/// command does not define. Declaration order, undeclared names last.
pub fn relevant_vars(sig: &Signature, pre: &Formula, cmd: &crate::model::Command, post: &Formula) -> Vec<(Ident, Type)> {
    let mut set: BTreeSet<Ident> = pre.vars();
    set.extend(cmd.live_in());
    let defined = cmd.definitely_defined();
    set.extend(post.vars().into_iter().filter(|v| !defined.contains(v)));
    let mut vars: Vec<(Ident, Type)> = set
        .into_iter()
        .map(|v| {
            let ty = sig.type_of(v.as_str()).unwrap_or(Type::Int);
            (v, ty)
        })
        .collect();
    vars.sort_by_key(|(v, _)| sig.position(v.as_str()).unwrap_or(usize::MAX));
    vars
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Refuted,
    Skipped,
}

/// A pre-state satisfying the precondition whose execution either fails
/// or reaches a state violating the postcondition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub pre: State,
    /// Absent when the command itself raised an error.
    pub post: Option<State>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VcResult {
    pub vc_id: String,
    pub pre_label: Ident,
    pub post_label: Ident,
    pub command: String,
    pub status: Status,
    /// Pre-states that satisfied the precondition and were executed.
    pub states_checked: u64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VcResult {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// Check one VC over `d`. States where the precondition cannot be
/// evaluated are skipped; a command error or an unevaluable postcondition
/// on a legal pre-state refutes the VC.
pub fn check_vc(sig: &Signature, vc: &VerificationCondition, d: &Domain) -> VcResult {
    let vars = relevant_vars(sig, &vc.pre, &vc.command, &vc.post);
    let mut result = VcResult {
        vc_id: vc.id(),
        pre_label: vc.pre_label.clone(),
        post_label: vc.post_label.clone(),
        command: vc.command.to_string(),
        status: Status::Holds,
        states_checked: 0,
        mode: Mode::Exhaustive,
        witness: None,
        reason: None,
    };
    if let Some((v, _)) = vars.iter().find(|(_, t)| *t == Type::Float) {
        result.status = Status::Skipped;
        result.reason = Some(format!("float variable {v} cannot be enumerated; check the integer instantiation"));
        return result;
    }
    let quotient = multiset_only(&vars, vc);
    let space = StateSpace::new(&vc.pre, vars, d).with_quotient(quotient);
    let mut witness = None;
    let mut checked = 0;
    let e = space.for_each(|s| {
        checked += 1;
        match refute(sig, vc, s) {
            Some(w) => {
                witness = Some(w);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    result.states_checked = checked;
    result.mode = e.mode;
    if let Some(w) = witness {
        result.status = Status::Refuted;
        result.witness = Some(w);
    }
    result
}

/// Arrays the command never touches and the assertions see only through
/// `perm`. Their rearrangements are interchangeable, so one suffices.
fn multiset_only(vars: &[(Ident, Type)], vc: &VerificationCondition) -> BTreeSet<Ident> {
    fn only_perm(f: &Formula, v: &Ident) -> bool {
        match f {
            Formula::Perm(..) => true,
            Formula::Not(g) => only_perm(g, v),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|g| only_perm(g, v)),
            other => !other.vars().contains(v),
        }
    }
    let mut touched = BTreeSet::new();
    vc.command.collect_vars(&mut touched);
    vars.iter()
        .filter(|(v, t)| *t == Type::IntArray && !touched.contains(v) && only_perm(&vc.pre, v) && only_perm(&vc.post, v))
        .map(|(v, _)| v.clone())
        .collect()
}

/// The counterexample starting at `s`, if any.
pub fn refute(sig: &Signature, vc: &VerificationCondition, s: &State) -> Option<Witness> {
    match successors(sig, &vc.command, s) {
        Err(e) => Some(Witness {
            pre: s.clone(),
            post: None,
            error: Some(e.to_string()),
        }),
        Ok(posts) => posts.into_iter().find_map(|t| match eval_formula(&vc.post, &t) {
            Ok(true) => None,
            Ok(false) => Some(Witness {
                pre: s.clone(),
                post: Some(t),
                error: None,
            }),
            Err(e) => Some(Witness {
                pre: s.clone(),
                post: Some(t),
                error: Some(format!("postcondition: {e}")),
            }),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VcReport {
    /// Float variables were retyped as int before checking.
    pub instantiated: bool,
    pub domain: Domain,
    pub all_hold: bool,
    pub total_states: u64,
    pub vcs: Vec<VcResult>,
}

impl VcReport {
    pub fn refuted(&self) -> impl Iterator<Item = &VcResult> {
        self.vcs.iter().filter(|v| v.status == Status::Refuted)
    }
}

/// Check every VC of `p` in parallel. Programs with float variables are
/// checked through their integer instantiation.
pub fn verify_program(p: &Program, d: &Domain) -> Result<VcReport, ExpandError> {
    let instantiated = p.has_float_vars();
    let q = if instantiated { p.int_instantiation() } else { p.clone() };
    let vcs = extract_vcs(&q)?;
    let mut results: Vec<VcResult> = vcs.par_iter().map(|vc| check_vc(&q.signature, vc, d)).collect();
    results.sort_by(|a, b| a.vc_id.cmp(&b.vc_id));
    Ok(VcReport {
        instantiated,
        domain: d.clone(),
        all_hold: results.iter().all(VcResult::holds),
        total_states: results.iter().map(|r| r.states_checked).sum(),
        vcs: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::sources;
    use crate::model::{Command, Span};
    use crate::parser::{parse_commands, parse_formula, ParseOptions, SourceFile};

    fn program(src: &str) -> Program {
        SourceFile::detect(src).parse(ParseOptions::default()).unwrap().program
    }

    fn egyptian_int() -> Program {
        program(sources::EGYPTIAN).int_instantiation()
    }

    fn vc_at(p: &Program, label: &str, arm: usize) -> VerificationCondition {
        extract_vcs(p)
            .unwrap()
            .into_iter()
            .find(|v| v.pre_label.as_str() == label && v.arm == arm)
            .unwrap()
    }

    #[test]
    fn one_vc_per_arm() {
        assert_eq!(extract_vcs(&program(sources::EGYPTIAN)).unwrap().len(), 9);
        let v2 = program(sources::published::EGYPTIAN_TRIPLES[1]);
        let ids: Vec<String> = extract_vcs(&v2).unwrap().iter().map(|v| v.to_string()).collect();
        assert_eq!(ids.len(), 4, "{ids:?}");
        assert_eq!(ids[0], "{S} skip {A}");
        let empty = program("S: true\n  if\n  fi\nH: true\n  return\n");
        assert!(extract_vcs(&empty).unwrap().is_empty());
    }

    #[test]
    fn doubling_arm_holds() {
        let p = egyptian_int();
        let vc = vc_at(&p, "A", 0);
        assert_eq!(vc.command.to_string(), "even(n); a := a + a; n := n / 2");
        let d = Domain::default().with_var_range("n", 1, 64);
        let r = check_vc(&p.signature, &vc, &d);
        assert_eq!(r.status, Status::Holds);
        assert_eq!(r.mode, Mode::Exhaustive);
        assert!(r.states_checked > 0);
    }

    #[test]
    fn halving_arm_from_b_holds() {
        let p = egyptian_int();
        let vc = vc_at(&p, "B", 1);
        assert_eq!(vc.command.to_string(), "n != 1; z := a; a := a + a; n := (n - 1) / 2");
        let d = Domain::default().with_var_range("n", 1, 64);
        assert_eq!(check_vc(&p.signature, &vc, &d).status, Status::Holds);
    }

    #[test]
    fn skip_into_false_is_refuted() {
        let vc = VerificationCondition {
            pre_label: Ident::new("P"),
            arm: 0,
            pre: Formula::Bool(true),
            command: Command::Skip,
            post_label: Ident::new("Q"),
            post: Formula::Bool(false),
            span: Span::default(),
        };
        let r = check_vc(&Signature::default(), &vc, &Domain::default());
        assert_eq!(r.status, Status::Refuted);
    }

    #[test]
    fn crashing_command_is_refuted() {
        let vc = VerificationCondition {
            pre_label: Ident::new("P"),
            arm: 0,
            pre: parse_formula("0 <= x & x <= 2").unwrap(),
            command: Command::sequence(parse_commands("y := 6 / x").unwrap()),
            post_label: Ident::new("Q"),
            post: Formula::Bool(true),
            span: Span::default(),
        };
        let r = check_vc(&Signature::default(), &vc, &Domain::default());
        assert_eq!(r.status, Status::Refuted);
        let w = r.witness.unwrap();
        assert!(w.post.is_none() && w.error.is_some());
    }

    #[test]
    fn egyptian_all_hold() {
        let d = Domain::default().with_var_range("n", 1, 32);
        let r = verify_program(&program(sources::EGYPTIAN), &d).unwrap();
        assert!(r.instantiated);
        assert_eq!(r.vcs.len(), 9);
        assert!(r.all_hold, "{:?}", r.refuted().collect::<Vec<_>>());
    }

    #[test]
    fn mutant_is_refuted_with_replayable_witness() {
        let src = sources::EGYPTIAN.replacen("a := a + a; n := n / 2; goto A", "a := a + a; n := n - 1; goto A", 1);
        let p = program(&src).int_instantiation();
        let d = Domain::default().with_var_range("n", 1, 32);
        let r = verify_program(&p, &d).unwrap();
        let bad: Vec<&VcResult> = r.refuted().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].vc_id, "A->A#0");
        let w = bad[0].witness.as_ref().unwrap();
        let vc = vc_at(&p, "A", 0);
        assert_eq!(eval_formula(&vc.pre, &w.pre), Ok(true));
        assert!(refute(&p.signature, &vc, &w.pre).is_some());
    }

    #[test]
    fn partitions_hold() {
        let dnf = Domain {
            int_range: (-1, 5),
            array_len: (0, 4),
            ..Domain::default()
        };
        let r = verify_program(&program(sources::DNF_PARTITION), &dnf).unwrap();
        assert!(r.all_hold, "{:?}", r.refuted().collect::<Vec<_>>());
        let fh = Domain {
            int_range: (-1, 5),
            array_len: (2, 4),
            ..Domain::default()
        };
        let r = verify_program(&program(sources::FH_PARTITION), &fh).unwrap();
        assert!(r.all_hold, "{:?}", r.refuted().collect::<Vec<_>>());
        assert!(r.vcs.iter().all(|v| v.mode == Mode::Exhaustive));
    }
}
