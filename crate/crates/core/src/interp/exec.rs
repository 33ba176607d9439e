use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::eval::{formula, int_of, out_of_bounds, term, Counters, EvalError};
use crate::model::{
    expanded_assertion, BlockBody, Command, ExpandError, Formula, Ident, LValue, Program,
    Signature, State, Target, Term, Type, Value, START,
};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Initial bindings. Ghosts left unbound are snapshotted from their
    /// base variable on entry to S.
    pub inputs: State,
    pub step_budget: u64,
    pub check_assertions: bool,
    pub trace: bool,
    /// Seed for `rndm`.
    pub rng_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: State::new(),
            step_budget: DEFAULT_STEP_BUDGET,
            check_assertions: true,
            trace: false,
            rng_seed: DEFAULT_SEED,
        }
    }
}

impl RunConfig {
    pub fn with_inputs(inputs: State) -> RunConfig {
        RunConfig {
            inputs,
            ..RunConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub label: Ident,
    /// State on arrival, before the arm runs.
    pub state: State,
    pub arm: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub counters: Counters,
}

impl Trace {
    /// One line per step: `label | var=value,... | arm=k`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{} | {} | arm={}", e.label, e.state, e.arm);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Halted,
    AssertionViolation { label: Ident, state: State },
    NoTrueGuard { label: Ident, state: State },
    BudgetExceeded,
    RuntimeError { label: Ident, detail: String },
}

impl Outcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub outcome: Outcome,
    pub state: State,
    pub steps: u64,
    pub trace: Trace,
}

/// Why a single step could not be taken.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("no guard of {0} is true")]
    NoTrueGuard(Ident),
    #[error("label {0} has no arms to step")]
    BareReturn(Ident),
    #[error("no label {0}")]
    UnknownLabel(Ident),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub arm: usize,
    pub target: Target,
    pub state: State,
}

/// Mutable context of a run: operation counters and the `rndm` source.
pub struct ExecContext {
    pub counters: Counters,
    rng: ChaCha8Rng,
}

impl ExecContext {
    pub fn new(seed: u64) -> ExecContext {
        ExecContext {
            counters: Counters::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

/// Convert a value to the declared type of `name`: ints widen into float
/// variables; anything else must already match.
pub fn coerce(sig: &Signature, name: &Ident, v: Value) -> Result<Value, EvalError> {
    let Some(ty) = sig.type_of(name.as_str()) else {
        return Ok(v);
    };
    match (ty, v) {
        (Type::Float, Value::Int(i)) => Ok(Value::Float(i.to_f64())),
        (Type::Int, v @ Value::Int(_))
        | (Type::Float, v @ Value::Float(_))
        | (Type::IntArray, v @ Value::Array(_)) => Ok(v),
        (ty, v) => Err(EvalError::Type(format!(
            "{name} is declared {ty} but given {}",
            v.type_name()
        ))),
    }
}

fn assign(sig: &Signature, s: &mut State, lv: &LValue, v: Value, c: &mut Counters) -> Result<(), EvalError> {
    match lv {
        LValue::Var(x) => {
            let v = coerce(sig, x, v)?;
            s.set(x.clone(), v);
        }
        LValue::Index(a, i) => {
            let idx = int_of(term(i, s, c)?, &|| format!("index `{i}`"))?;
            let v = int_of(v, &|| format!("value stored into {a}"))?;
            let arr = array_mut(s, a)?;
            if !arr.set(&idx, v) {
                return Err(out_of_bounds(a, arr, &idx));
            }
        }
    }
    Ok(())
}

fn array_mut<'a>(s: &'a mut State, a: &Ident) -> Result<&'a mut crate::model::IntArray, EvalError> {
    match s.get_mut(a.as_str()) {
        Some(Value::Array(arr)) => Ok(Arc::make_mut(arr)),
        Some(other) => Err(EvalError::Type(format!("{a} is {}, not an array", other.type_name()))),
        None => Err(EvalError::Unbound(a.clone())),
    }
}

/// Bounds of `rndm(lo, hi)`; empty or huge ranges are errors.
fn choice_range(x: &Ident, lo: &Term, hi: &Term, s: &State, c: &mut Counters) -> Result<(i64, i64), EvalError> {
    let l = int_of(term(lo, s, c)?, &|| format!("`{lo}`"))?;
    let h = int_of(term(hi, s, c)?, &|| format!("`{hi}`"))?;
    match (l.to_i64(), h.to_i64()) {
        (Some(a), Some(b)) if a <= b => Ok((a, b)),
        _ => Err(EvalError::EmptyChoice {
            var: x.clone(),
            lo: l.to_string(),
            hi: h.to_string(),
        }),
    }
}

/// Run one command in place. Returns `false` when a guard inside it is
/// false: the command has no successor from this state.
pub fn exec_command(
    sig: &Signature,
    cmd: &Command,
    s: &mut State,
    ctx: &mut ExecContext,
) -> Result<bool, EvalError> {
    match cmd {
        Command::Skip => {}
        Command::Guard(f) => return formula(f, s, &mut ctx.counters),
        Command::Assign(lv, t) => {
            let v = term(t, s, &mut ctx.counters)?;
            assign(sig, s, lv, v, &mut ctx.counters)?;
        }
        Command::Choose(x, lo, hi) => {
            let (l, h) = choice_range(x, lo, hi, s, &mut ctx.counters)?;
            let pick = ctx.rng.gen_range(l..=h);
            assign(sig, s, &LValue::Var(x.clone()), Value::int(pick), &mut ctx.counters)?;
        }
        Command::Swap(a, i, j) => {
            let c = &mut ctx.counters;
            let i = int_of(term(i, s, c)?, &|| format!("index `{i}`"))?;
            let j = int_of(term(j, s, c)?, &|| format!("index `{j}`"))?;
            c.swaps += 1;
            let arr = array_mut(s, a)?;
            if !arr.swap(&i, &j) {
                let bad = if arr.get(&i).is_none() { i } else { j };
                return Err(out_of_bounds(a, arr, &bad));
            }
        }
        Command::Print(t) => {
            let v = term(t, s, &mut ctx.counters)?;
            s.push_out(v);
        }
        Command::Seq(a, b) => {
            return Ok(exec_command(sig, a, s, ctx)? && exec_command(sig, b, s, ctx)?);
        }
    }
    Ok(true)
}

/// Every state the command can reach from `s`. `rndm` contributes one
/// successor per value in its range; a false guard contributes none.
pub fn successors(sig: &Signature, cmd: &Command, s: &State) -> Result<Vec<State>, EvalError> {
    match cmd {
        Command::Seq(a, b) => {
            let mut out = Vec::new();
            for mid in successors(sig, a, s)? {
                out.extend(successors(sig, b, &mid)?);
            }
            Ok(out)
        }
        Command::Choose(x, lo, hi) => {
            let (l, h) = choice_range(x, lo, hi, s, &mut Counters::default())?;
            (l..=h)
                .map(|k| {
                    let mut next = s.clone();
                    next.set(x.clone(), coerce(sig, x, Value::int(k))?);
                    Ok(next)
                })
                .collect()
        }
        other => {
            let mut next = s.clone();
            let mut ctx = ExecContext::new(DEFAULT_SEED);
            Ok(if exec_command(sig, other, &mut next, &mut ctx)? {
                vec![next]
            } else {
                Vec::new()
            })
        }
    }
}

/// Take the first arm of `label` whose guard and body both go through.
pub fn step_with(
    p: &Program,
    label: &Ident,
    s: &State,
    ctx: &mut ExecContext,
) -> Result<Step, StepError> {
    let block = p
        .block(label.as_str())
        .ok_or_else(|| StepError::UnknownLabel(label.clone()))?;
    let arms = match &block.body {
        BlockBody::Return => return Err(StepError::BareReturn(label.clone())),
        BlockBody::Arms(arms) => arms,
    };
    for (k, arm) in arms.iter().enumerate() {
        if !formula(&arm.guard, s, &mut ctx.counters)? {
            continue;
        }
        let mut next = s.clone();
        let saved = ctx.counters;
        let mut ok = true;
        for c in &arm.body {
            if !exec_command(&p.signature, c, &mut next, ctx)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Step {
                arm: k,
                target: arm.target.clone(),
                state: next,
            });
        }
        ctx.counters = saved;
    }
    Err(StepError::NoTrueGuard(label.clone()))
}

/// [`step_with`] using a fresh context.
pub fn step(p: &Program, label: &Ident, s: &State) -> Result<Step, StepError> {
    step_with(p, label, s, &mut ExecContext::new(DEFAULT_SEED))
}

/// A program prepared for repeated runs: label assertions are expanded once.
pub struct Interpreter<'p> {
    program: &'p Program,
    assertions: HashMap<Ident, Formula>,
}

impl<'p> Interpreter<'p> {
    pub fn new(program: &'p Program) -> Result<Interpreter<'p>, ExpandError> {
        let mut assertions = HashMap::new();
        for b in &program.blocks {
            assertions.insert(b.label.clone(), expanded_assertion(program, b.label.as_str())?);
        }
        Ok(Interpreter { program, assertions })
    }

    pub fn program(&self) -> &Program {
        self.program
    }

    pub fn assertion(&self, label: &str) -> Option<&Formula> {
        self.assertions.get(label)
    }

    /// Bind the inputs, widening ints into float variables, and snapshot
    /// every unbound ghost from its base.
    pub fn initial_state(&self, inputs: &State) -> Result<State, EvalError> {
        let mut s = State::new();
        for (k, v) in inputs.bindings() {
            s.set(k.clone(), coerce(&self.program.signature, k, v.clone())?);
        }
        for (ghost, base) in self.program.signature.ghosts() {
            if s.get(ghost.as_str()).is_none() {
                if let Some(v) = s.get(base.as_str()).cloned() {
                    s.set(ghost, v);
                }
            }
        }
        Ok(s)
    }

    fn check(&self, label: &Ident, s: &State) -> Option<Outcome> {
        let f = self.assertions.get(label)?;
        match formula(f, s, &mut Counters::default()) {
            Ok(true) => None,
            Ok(false) => Some(Outcome::AssertionViolation {
                label: label.clone(),
                state: s.clone(),
            }),
            Err(e) => Some(Outcome::RuntimeError {
                label: label.clone(),
                detail: format!("evaluating the assertion of {label}: {e}"),
            }),
        }
    }

    pub fn run(&self, cfg: &RunConfig) -> RunResult {
        let mut trace = Trace::default();
        let mut ctx = ExecContext::new(cfg.rng_seed);
        let mut label = Ident::new(START);
        let mut steps = 0;
        let finish = |outcome, state, steps, mut trace: Trace, ctx: &ExecContext| {
            trace.counters = ctx.counters;
            RunResult {
                outcome,
                state,
                steps,
                trace,
            }
        };

        let mut state = match self.initial_state(&cfg.inputs) {
            Ok(s) => s,
            Err(e) => {
                let o = Outcome::RuntimeError {
                    label,
                    detail: e.to_string(),
                };
                return finish(o, cfg.inputs.clone(), 0, trace, &ctx);
            }
        };
        if cfg.check_assertions {
            if let Some(o) = self.check(&label, &state) {
                return finish(o, state, 0, trace, &ctx);
            }
        }
        loop {
            if matches!(
                self.program.block(label.as_str()).map(|b| &b.body),
                Some(BlockBody::Return)
            ) {
                return finish(Outcome::Halted, state, steps, trace, &ctx);
            }
            if steps >= cfg.step_budget {
                return finish(Outcome::BudgetExceeded, state, steps, trace, &ctx);
            }
            let taken = match step_with(self.program, &label, &state, &mut ctx) {
                Ok(t) => t,
                Err(StepError::NoTrueGuard(l)) => {
                    let o = Outcome::NoTrueGuard {
                        label: l,
                        state: state.clone(),
                    };
                    return finish(o, state, steps, trace, &ctx);
                }
                Err(e) => {
                    let o = Outcome::RuntimeError {
                        label: label.clone(),
                        detail: e.to_string(),
                    };
                    return finish(o, state, steps, trace, &ctx);
                }
            };
            if cfg.trace {
                trace.entries.push(TraceEntry {
                    label: label.clone(),
                    state: state.clone(),
                    arm: taken.arm,
                });
            }
            steps += 1;
            state = taken.state;
            label = Program::target_label(&taken.target);
            if cfg.check_assertions {
                if let Some(o) = self.check(&label, &state) {
                    return finish(o, state, steps, trace, &ctx);
                }
            }
            if taken.target == Target::Return {
                return finish(Outcome::Halted, state, steps, trace, &ctx);
            }
        }
    }
}

/// Run `p` once. Assertion expansion failures surface as a runtime error
/// at S.
pub fn run(p: &Program, cfg: &RunConfig) -> RunResult {
    match Interpreter::new(p) {
        Ok(interp) => interp.run(cfg),
        Err(e) => RunResult {
            outcome: Outcome::RuntimeError {
                label: Ident::new(START),
                detail: e.to_string(),
            },
            state: cfg.inputs.clone(),
            steps: 0,
            trace: Trace::default(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::sources;
    use crate::model::IntArray;
    use crate::parser::{ParseOptions, SourceFile};

    fn program(src: &str) -> Program {
        SourceFile::detect(src).parse(ParseOptions::default()).unwrap().program
    }

    fn arr(xs: &[i64]) -> Value {
        Value::array(IntArray::zero_based(xs.iter().copied()))
    }

    #[test]
    fn egyptian_step_at_a_doubles() {
        let p = program(sources::EGYPTIAN);
        let s = State::new()
            .with("n", Value::int(8))
            .with("a", Value::Float(5.0))
            .with("n0", Value::int(8))
            .with("a0", Value::Float(5.0));
        let st = step(&p, &Ident::new("A"), &s).unwrap();
        assert_eq!(st.arm, 0);
        assert_eq!(st.target, Target::Label(Ident::new("A")));
        assert_eq!(st.state.get("n"), Some(&Value::int(4)));
        assert_eq!(st.state.get("a"), Some(&Value::Float(10.0)));
    }

    #[test]
    fn egyptian_runs_count_additions() {
        let p = program(sources::EGYPTIAN);
        for (n, a, out, adds) in [(8, 5, 40.0, 3), (7, 3, 21.0, 4)] {
            let cfg = RunConfig::with_inputs(State::new().with("n", Value::int(n)).with("a", Value::int(a)));
            let r = run(&p, &cfg);
            assert_eq!(r.outcome, Outcome::Halted, "n={n}");
            assert_eq!(r.state.out(), &[Value::Float(out)]);
            assert_eq!(r.trace.counters.additions, adds, "n={n}");
        }
    }

    #[test]
    fn dnf_step_blue_arm() {
        let p = program(sources::DNF_PARTITION);
        let s = State::new()
            .with("a", arr(&[2, 0, 1]))
            .with("X", Value::int(1))
            .with("f", Value::int(0))
            .with("s", Value::int(0))
            .with("t", Value::int(3));
        let st = step(&p, &Ident::new("B"), &s).unwrap();
        assert_eq!(st.arm, 2);
        assert_eq!(st.state.get("t"), Some(&Value::int(2)));
        assert_eq!(st.state.get("a"), Some(&arr(&[1, 0, 2])));
    }

    #[test]
    fn dnf_worked_example() {
        let p = program(sources::DNF_PARTITION);
        let inputs = State::new()
            .with("a", arr(&[2, 0, 1]))
            .with("m", Value::int(0))
            .with("n", Value::int(2))
            .with("X", Value::int(1));
        let r = run(&p, &RunConfig { trace: true, ..RunConfig::with_inputs(inputs) });
        assert_eq!(r.outcome, Outcome::Halted);
        assert_eq!(r.state.get("a"), Some(&arr(&[0, 1, 2])));
        assert_eq!(r.state.get("j"), Some(&Value::int(0)));
        assert_eq!(r.state.get("i"), Some(&Value::int(2)));
        let dump = r.trace.dump();
        assert!(dump.starts_with("S | "), "{dump}");
        assert!(dump.lines().all(|l| l.contains(" | arm=")));
    }

    #[test]
    fn all_false_guards_abort() {
        let p = program(sources::DNF_PARTITION);
        let s = State::new().with("s", Value::int(3)).with("t", Value::int(1));
        assert_eq!(step(&p, &Ident::new("A"), &s), Err(StepError::NoTrueGuard(Ident::new("A"))));
    }

    #[test]
    fn violated_assertion_is_reported() {
        let src = sources::EGYPTIAN.replace("a := a + a; n := n / 2; goto A", "a := a + a + a; n := n / 2; goto A");
        let p = program(&src);
        let r = run(&p, &RunConfig::with_inputs(State::new().with("n", Value::int(4)).with("a", Value::int(1))));
        match r.outcome {
            Outcome::AssertionViolation { label, .. } => assert_eq!(label.as_str(), "A"),
            other => panic!("{other:?}"),
        }
        let r = run(
            &p,
            &RunConfig {
                check_assertions: false,
                ..RunConfig::with_inputs(State::new().with("n", Value::int(4)).with("a", Value::int(1)))
            },
        );
        assert_eq!(r.outcome, Outcome::Halted);
        assert_eq!(r.state.out(), &[Value::Float(9.0)]);
    }

    #[test]
    fn budget_is_enforced() {
        let p = program(sources::EGYPTIAN);
        let cfg = RunConfig {
            step_budget: 2,
            ..RunConfig::with_inputs(State::new().with("n", Value::int(64)).with("a", Value::int(1)))
        };
        assert_eq!(run(&p, &cfg).outcome, Outcome::BudgetExceeded);
    }

    #[test]
    fn choice_is_seeded_and_enumerable() {
        let src = "var x: int\nS: true\n  if true -> x := rndm(1, 6); goto H\n  fi\nH: 1 <= x & x <= 6\n  return\n";
        let p = program(src);
        let cfg = RunConfig { rng_seed: 7, ..RunConfig::default() };
        let a = run(&p, &cfg);
        let b = run(&p, &cfg);
        assert_eq!(a.outcome, Outcome::Halted);
        assert_eq!(a.state, b.state);
        let arm = p.block("S").unwrap().arms()[0].command();
        let succ = successors(&p.signature, &arm, &State::new()).unwrap();
        assert_eq!(succ.len(), 6);
    }
}
