//! Checked execution: guards are tried in textual order and every label's
//! assertion is evaluated on arrival.

mod eval;
mod exec;

pub use eval::{eval_formula, eval_term, Counters, EvalError};
pub use exec::{
    coerce, exec_command, run, step, step_with, successors, ExecContext, Interpreter, Outcome,
    RunConfig, RunResult, Step, StepError, Trace, TraceEntry, DEFAULT_SEED, DEFAULT_STEP_BUDGET,
};
