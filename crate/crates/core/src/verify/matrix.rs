//! Programs as matrices of command sets. Cell (Q, P) holds the commands
//! of the arms leading from P to Q; sum is union and the cell-level
//! product is sequencing.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use super::domain::{Domain, Mode, StateSpace};
use super::vc::relevant_vars;
use crate::interp::{eval_formula, successors, EvalError};
use crate::model::{expanded_assertion, Command, ExpandError, Formula, Ident, Program, Signature, State, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("label vocabularies differ: {left:?} vs {right:?}")]
    VocabularyMismatch { left: Vec<String>, right: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeMatrix {
    pub labels: Vec<Ident>,
    /// Keyed by (row, column) = (to-label, from-label). Absent means empty.
    pub cells: BTreeMap<(Ident, Ident), BTreeSet<Command>>,
}

static EMPTY: BTreeSet<Command> = BTreeSet::new();

impl CodeMatrix {
    pub fn zero(labels: Vec<Ident>) -> CodeMatrix {
        CodeMatrix {
            labels,
            cells: BTreeMap::new(),
        }
    }

    /// `skip` on the diagonal.
    pub fn identity(labels: Vec<Ident>) -> CodeMatrix {
        let mut m = CodeMatrix::zero(labels);
        for l in m.labels.clone() {
            m.insert(l.clone(), l, Command::Skip);
        }
        m
    }

    pub fn insert(&mut self, row: Ident, col: Ident, c: Command) {
        self.cells.entry((row, col)).or_default().insert(c);
    }

    pub fn cell(&self, row: &str, col: &str) -> &BTreeSet<Command> {
        self.cells
            .get(&(Ident::new(row), Ident::new(col)))
            .unwrap_or(&EMPTY)
    }

    /// Total number of commands over all cells.
    pub fn command_count(&self) -> usize {
        self.cells.values().map(BTreeSet::len).sum()
    }

    /// The triples `{col} c {row}` the matrix stands for.
    pub fn triples(&self) -> Vec<(Ident, Command, Ident)> {
        self.cells
            .iter()
            .flat_map(|((row, col), cs)| cs.iter().map(move |c| (col.clone(), c.clone(), row.clone())))
            .collect()
    }

    /// `self · m1`: cell (R, P) = { c1; c2 | c1 in m1(Q, P), c2 in self(R, Q) }.
    pub fn product(&self, m1: &CodeMatrix) -> Result<CodeMatrix, MatrixError> {
        let (l, r): (BTreeSet<_>, BTreeSet<_>) = (self.labels.iter().collect(), m1.labels.iter().collect());
        if l != r {
            return Err(MatrixError::VocabularyMismatch {
                left: self.labels.iter().map(|l| l.to_string()).collect(),
                right: m1.labels.iter().map(|l| l.to_string()).collect(),
            });
        }
        let mut out = CodeMatrix::zero(self.labels.clone());
        for ((q, p), first) in &m1.cells {
            for ((r, q2), second) in &self.cells {
                if q != q2 {
                    continue;
                }
                for c1 in first {
                    for c2 in second {
                        out.insert(r.clone(), p.clone(), Command::seq(c1.clone(), c2.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Every cell command with `skip` and `true` units removed.
    pub fn simplified(&self) -> CodeMatrix {
        let mut out = CodeMatrix::zero(self.labels.clone());
        for ((r, c), cs) in &self.cells {
            for cmd in cs {
                out.insert(r.clone(), c.clone(), cmd.simplify());
            }
        }
        out
    }
}

impl fmt::Display for CodeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((row, col), cs) in &self.cells {
            let cmds: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            writeln!(f, "({row}, {col}): {{ {} }}", cmds.join(" | "))?;
        }
        Ok(())
    }
}

/// Serializable cell listing.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixCell {
    pub row: Ident,
    pub col: Ident,
    pub commands: Vec<String>,
}

impl CodeMatrix {
    pub fn cell_listing(&self) -> Vec<MatrixCell> {
        self.cells
            .iter()
            .map(|((row, col), cs)| MatrixCell {
                row: row.clone(),
                col: col.clone(),
                commands: cs.iter().map(|c| c.to_string()).collect(),
            })
            .collect()
    }
}

/// Cell (Q, P) holds the arm commands from P to Q; `return` arms land in
/// row H.
pub fn matrix_of(p: &Program) -> CodeMatrix {
    let mut m = CodeMatrix::zero(p.labels());
    for (block, _, arm) in p.arms() {
        m.insert(Program::target_label(&arm.target), block.label.clone(), arm.command());
    }
    m
}

/// `matrix_product(m2, m1)`: first `m1`, then `m2`.
pub fn matrix_product(m2: &CodeMatrix, m1: &CodeMatrix) -> Result<CodeMatrix, MatrixError> {
    m2.product(m1)
}

/// The expanded assertion of every label.
#[derive(Clone, Debug, PartialEq)]
pub struct AssertionVector(pub BTreeMap<Ident, Formula>);

impl AssertionVector {
    pub fn of(p: &Program) -> Result<AssertionVector, ExpandError> {
        let mut m = BTreeMap::new();
        for l in p.labels() {
            m.insert(l.clone(), expanded_assertion(p, l.as_str())?);
        }
        Ok(AssertionVector(m))
    }

    pub fn get(&self, label: &Ident) -> &Formula {
        static TRUE: Formula = Formula::Bool(true);
        self.0.get(label).unwrap_or(&TRUE)
    }
}

fn typed_vars(sig: &Signature, vars: BTreeSet<Ident>) -> Vec<(Ident, Type)> {
    let mut v: Vec<(Ident, Type)> = vars
        .into_iter()
        .map(|x| {
            let ty = sig.type_of(x.as_str()).unwrap_or(Type::Int);
            (x, ty)
        })
        .collect();
    v.sort_by_key(|(x, _)| sig.position(x.as_str()).unwrap_or(usize::MAX));
    v
}

/// Keep only the variables of `keep` (and the print stream).
fn project(s: &State, keep: &BTreeSet<Ident>) -> State {
    let mut out = s.clone();
    let drop: Vec<Ident> = s.bindings().map(|(k, _)| k.clone()).filter(|k| !keep.contains(k)).collect();
    for k in drop {
        out.unset(k.as_str());
    }
    out
}

/// The image of one row: states reached in that row's label, projected
/// onto the variables of its assertion.
#[derive(Clone, Debug, Default)]
pub struct RowImage {
    pub states: HashSet<State>,
    /// Pre-states (with their column) on which a command failed.
    pub errors: Vec<(Ident, State, String)>,
    pub sampled: bool,
}

/// For each row Q, the union over columns P and commands C in (Q, P) of
/// the image under C of the states satisfying a(P) in `d`.
pub fn apply_matrix(
    sig: &Signature,
    m: &CodeMatrix,
    a: &AssertionVector,
    d: &Domain,
) -> BTreeMap<Ident, RowImage> {
    let mut rows: BTreeMap<Ident, RowImage> = m.labels.iter().map(|l| (l.clone(), RowImage::default())).collect();
    for ((q, p), cmds) in &m.cells {
        let pre = a.get(p);
        let post = a.get(q);
        let keep = post.vars();
        let row = rows.entry(q.clone()).or_default();
        for c in cmds {
            let vars = relevant_vars(sig, pre, c, post);
            let space = StateSpace::new(pre, vars, d);
            let e = space.for_each(|s| {
                match successors(sig, c, s) {
                    Ok(ts) => row.states.extend(ts.iter().map(|t| project(t, &keep))),
                    Err(e) => row.errors.push((p.clone(), s.clone(), e.to_string())),
                }
                ControlFlow::Continue(())
            });
            row.sampled |= e.mode == Mode::Sampled;
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// An image state outside the row's assertion.
    NotContained,
    /// A state of the assertion that no image reaches.
    NotReached,
    /// A command failed on a pre-state.
    CommandError,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixpointWitness {
    pub label: Ident,
    pub state: State,
    pub kind: WitnessKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowSummary {
    pub label: Ident,
    pub image_size: usize,
    pub extension_size: u64,
    pub contained: bool,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixpointReport {
    /// MA ⊆ A row by row: every VC holds over the domain.
    pub contained: bool,
    /// MA = A: additionally every assertion state is reached.
    pub equal: bool,
    pub sampled: bool,
    pub rows: Vec<RowSummary>,
    /// At most a few per row.
    pub witnesses: Vec<FixpointWitness>,
}

const WITNESSES_PER_ROW: usize = 3;

/// Evaluate MA against A over `d`. Programs with float variables use
/// their integer instantiation.
pub fn fixpoint_check(p: &Program, d: &Domain) -> Result<FixpointReport, ExpandError> {
    let q = if p.has_float_vars() { p.int_instantiation() } else { p.clone() };
    let a = AssertionVector::of(&q)?;
    let m = matrix_of(&q);
    let images = apply_matrix(&q.signature, &m, &a, d);
    let mut report = FixpointReport {
        contained: true,
        equal: true,
        sampled: false,
        rows: Vec::new(),
        witnesses: Vec::new(),
    };
    for label in &m.labels {
        let img = &images[label];
        let f = a.get(label);
        report.sampled |= img.sampled;
        let mut row_contained = img.errors.is_empty();
        let mut found = 0;
        for (_, s, err) in img.errors.iter().take(WITNESSES_PER_ROW) {
            report.witnesses.push(FixpointWitness {
                label: label.clone(),
                state: s.clone(),
                kind: WitnessKind::CommandError,
                detail: Some(err.clone()),
            });
        }
        let mut bad: Vec<&State> = img.states.iter().filter(|s| eval_formula(f, s) != Ok(true)).collect();
        bad.sort_by_key(|s| s.to_string());
        if !bad.is_empty() {
            row_contained = false;
        }
        for s in bad.into_iter().take(WITNESSES_PER_ROW) {
            report.witnesses.push(FixpointWitness {
                label: label.clone(),
                state: s.clone(),
                kind: WitnessKind::NotContained,
                detail: None,
            });
        }
        let space = StateSpace::new(f, typed_vars(&q.signature, f.vars()), d);
        let mut row_equal = row_contained;
        let e = space.for_each(|s| {
            if !img.states.contains(s) {
                row_equal = false;
                if found < WITNESSES_PER_ROW {
                    found += 1;
                    report.witnesses.push(FixpointWitness {
                        label: label.clone(),
                        state: s.clone(),
                        kind: WitnessKind::NotReached,
                        detail: None,
                    });
                }
            }
            ControlFlow::Continue(())
        });
        report.sampled |= e.mode == Mode::Sampled;
        report.contained &= row_contained;
        report.equal &= row_equal;
        report.rows.push(RowSummary {
            label: label.clone(),
            image_size: img.states.len(),
            extension_size: e.satisfying,
            contained: row_contained,
            equal: row_equal,
        });
    }
    Ok(report)
}

/// The relation denoted by a set of commands, restricted to `inputs`:
/// every (input, output) pair.
pub fn relation(sig: &Signature, cmds: &BTreeSet<Command>, inputs: &[State]) -> Result<HashSet<(State, State)>, EvalError> {
    let mut out = HashSet::new();
    for s in inputs {
        for c in cmds {
            for t in successors(sig, c, s)? {
                out.insert((s.clone(), t));
            }
        }
    }
    Ok(out)
}

/// True when every cell of `a` and `b` denotes the same relation on
/// `inputs`. A cell whose command fails counts as unequal.
pub fn extensionally_equal(sig: &Signature, a: &CodeMatrix, b: &CodeMatrix, inputs: &[State]) -> bool {
    let keys: BTreeSet<&(Ident, Ident)> = a.cells.keys().chain(b.cells.keys()).collect();
    keys.into_iter().all(|(r, c)| {
        let ra = relation(sig, a.cell(r.as_str(), c.as_str()), inputs);
        let rb = relation(sig, b.cell(r.as_str(), c.as_str()), inputs);
        matches!((ra, rb), (Ok(x), Ok(y)) if x == y)
    })
}

/// All states over the whole signature within `d`.
pub fn all_states(sig: &Signature, d: &Domain) -> Vec<State> {
    static TRUE: Formula = Formula::Bool(true);
    let vars = typed_vars(sig, sig.vars.iter().map(|v| v.name.clone()).collect());
    let space = StateSpace::new(&TRUE, vars, d);
    let mut out = Vec::new();
    space.for_each(|s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::sources;
    use crate::parser::{ParseOptions, SourceFile};
    use crate::verify::verify_program;

    fn program(src: &str) -> Program {
        SourceFile::detect(src).parse(ParseOptions::default()).unwrap().program
    }

    #[test]
    fn egyptian_matrix_shape() {
        let p = program(sources::EGYPTIAN);
        let m = matrix_of(&p);
        assert_eq!(m.labels.len(), 6);
        assert_eq!(m.command_count(), 9);
        assert_eq!(m.triples().len(), 9);
        assert_eq!(m.cell("A", "A").len(), 1);
        let empty = program("S: true\n  if\n  fi\nH: true\n  return\n");
        assert!(matrix_of(&empty).cells.is_empty());
    }

    #[test]
    fn identity_laws_syntactically_after_simplification() {
        let p = program(sources::EGYPTIAN);
        let m = matrix_of(&p);
        let i = CodeMatrix::identity(p.labels());
        assert_eq!(m.product(&i).unwrap().simplified(), m.simplified());
        assert_eq!(i.product(&m).unwrap().simplified(), m.simplified());
        assert_eq!(i.product(&i).unwrap().simplified(), i);
    }

    #[test]
    fn two_step_path_from_s_to_b() {
        let m = matrix_of(&program(sources::EGYPTIAN));
        let mm = matrix_product(&m, &m).unwrap();
        let cell: Vec<String> = mm.cell("B", "S").iter().map(|c| c.to_string()).collect();
        assert_eq!(cell, ["skip; odd(n)"]);
    }

    #[test]
    fn vocabulary_must_match() {
        let a = CodeMatrix::identity(vec![Ident::new("S"), Ident::new("H")]);
        let b = CodeMatrix::identity(vec![Ident::new("S")]);
        assert!(a.product(&b).is_err());
    }

    #[test]
    fn laws_hold_extensionally() {
        let p = program(sources::EGYPTIAN).int_instantiation();
        let d = Domain {
            int_range: (-2, 2),
            ..Domain::default()
        }
        .with_var_range("n", 1, 6);
        let inputs = all_states(&p.signature, &d);
        let m = matrix_of(&p);
        let i = CodeMatrix::identity(p.labels());
        let sig = &p.signature;
        assert!(extensionally_equal(sig, &m.product(&i).unwrap(), &m, &inputs));
        assert!(extensionally_equal(sig, &i.product(&m).unwrap(), &m, &inputs));
        let m2 = m.product(&m).unwrap();
        let left = m.product(&m2).unwrap();
        let right = m2.product(&m).unwrap();
        assert!(extensionally_equal(sig, &left, &right, &inputs));
        assert!(!extensionally_equal(sig, &m2, &m, &inputs));
    }

    #[test]
    fn identity_and_zero_images() {
        let p = program(sources::EGYPTIAN).int_instantiation();
        let d = Domain::default().with_var_range("n", 1, 8);
        let a = AssertionVector::of(&p).unwrap();
        let zero = apply_matrix(&p.signature, &CodeMatrix::zero(p.labels()), &a, &d);
        assert!(zero.values().all(|r| r.states.is_empty()));
        let id = apply_matrix(&p.signature, &CodeMatrix::identity(p.labels()), &a, &d);
        let f = a.get(&Ident::new("A"));
        let img = &id[&Ident::new("A")];
        assert!(!img.states.is_empty());
        assert!(img.states.iter().all(|s| eval_formula(f, s) == Ok(true)));
    }

    #[test]
    fn fixpoint_agrees_with_verification() {
        let d = Domain::default().with_var_range("n", 1, 16);
        let p = program(sources::EGYPTIAN);
        let f = fixpoint_check(&p, &d).unwrap();
        assert!(f.contained);
        assert!(!f.equal);
        assert!(verify_program(&p, &d).unwrap().all_hold);

        let bad = program(&sources::EGYPTIAN.replacen("n := n / 2; goto A", "n := n - 1; goto A", 1));
        let f = fixpoint_check(&bad, &d).unwrap();
        assert!(!f.contained);
        assert!(f.witnesses.iter().any(|w| w.kind == WitnessKind::NotContained && w.label.as_str() == "A"));
        assert!(!verify_program(&bad, &d).unwrap().all_hold);
    }
}
