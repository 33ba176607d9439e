//! Compiled transcriptions against the interpreter on a suite's inputs.

use serde::Serialize;

use super::{cases, program, Entry, SuiteMode};
use crate::interp::{Interpreter, Outcome, RunConfig};
use crate::model::{State, Value};
use crate::transpile::{CompileError, CompiledProgram};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Agreement {
    pub entry: Entry,
    pub cases: usize,
    pub agreed: usize,
    /// Cases whose interpreter results do not fit a C `int`, not compared.
    pub skipped: usize,
    /// The first input on which the two disagree, and how.
    pub first_mismatch: Option<(State, String)>,
}

impl Agreement {
    pub fn ok(&self) -> bool {
        self.agreed + self.skipped == self.cases
    }
}

/// Compile `e`'s transcription and run it and the interpreter on every
/// input of `mode`. Compares printed values, arrays and output variables.
pub fn compare_with_c(e: Entry, mode: SuiteMode) -> Result<Agreement, CompileError> {
    let p = program(e);
    let exe = CompiledProgram::build(p, &e.transpile_config())?;
    let inputs = cases(e, mode);
    let compiled = exe.run(&inputs)?;
    let interp = Interpreter::new(p).expect("corpus assertions expand");
    let mut out = Agreement {
        entry: e,
        cases: inputs.len(),
        agreed: 0,
        skipped: 0,
        first_mismatch: None,
    };
    for (s, c) in inputs.iter().zip(&compiled) {
        let r = interp.run(&RunConfig {
            check_assertions: false,
            ..RunConfig::with_inputs(s.clone())
        });
        if r.outcome.is_halted() && !fits_c_int(&r.state) {
            out.skipped += 1;
            continue;
        }
        let diff = if r.outcome != Outcome::Halted {
            Some(format!("interpreter ended {:?}", r.outcome))
        } else {
            difference(&r.state, &c.state, &c.printed)
        };
        match diff {
            None => out.agreed += 1,
            Some(d) if out.first_mismatch.is_none() => out.first_mismatch = Some((s.clone(), d)),
            Some(_) => {}
        }
    }
    Ok(out)
}

fn fits_c_int(s: &State) -> bool {
    let small = |i: &crate::model::Int| i.to_i64().is_some_and(|v| i32::try_from(v).is_ok());
    s.bindings().map(|(_, v)| v).chain(s.out()).all(|v| match v {
        Value::Int(i) => small(i),
        Value::Array(a) => a.elems().iter().all(small),
        Value::Float(_) => true,
    })
}

fn difference(interp: &State, c: &State, printed: &[f64]) -> Option<String> {
    let want: Vec<f64> = interp
        .out()
        .iter()
        .map(|v| match v {
            Value::Int(i) => i.to_f64(),
            Value::Float(x) => *x,
            Value::Array(_) => f64::NAN,
        })
        .collect();
    if want != printed {
        return Some(format!("printed {printed:?}, interpreter printed {want:?}"));
    }
    for (v, x) in c.bindings() {
        match interp.get(v.as_str()) {
            Some(y) if y.semantic_eq(x) == Some(true) => {}
            other => return Some(format!("{v} = {x} in C, {other:?} in the interpreter")),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transpile::c_compiler;

    #[test]
    fn random_inputs_agree() {
        if c_compiler().is_none() {
            eprintln!("no C compiler; skipping");
            return;
        }
        for e in Entry::ALL {
            let a = compare_with_c(e, SuiteMode::Random { count: 100, seed: 5 }).unwrap();
            assert!(a.ok(), "{a:?}");
            assert!(a.agreed > 0);
        }
    }
}
