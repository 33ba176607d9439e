//! The four incremental triple-form versions of Egyptian multiplication.
//! Every version's VCs hold, but only the last one reaches H from every
//! input: the earlier ones cannot give wrong answers, only no answer.

use serde::Serialize;

use super::sources::published::EGYPTIAN_TRIPLES;
use crate::interp::{run, Outcome, RunConfig};
use crate::model::{Program, State, Value};
use crate::parser::{ParseOptions, SourceFile};
use crate::verify::{verify_program, Domain};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VersionReport {
    /// 1 to 4.
    pub version: usize,
    pub vcs: usize,
    pub all_hold: bool,
    pub runs: usize,
    pub halted: usize,
    /// The first input from which no guard leads on.
    pub first_stuck: Option<State>,
}

impl VersionReport {
    pub fn complete(&self) -> bool {
        self.halted == self.runs
    }
}

pub fn version(k: usize) -> Program {
    SourceFile::detect(EGYPTIAN_TRIPLES[k - 1])
        .parse(ParseOptions::default())
        .expect("published versions parse")
        .program
}

/// Verify each version on `d` and run it for n in 1..=n_max and a in 1..=3.
pub fn egyptian_versions(d: &Domain, n_max: i64) -> Vec<VersionReport> {
    (1..=EGYPTIAN_TRIPLES.len())
        .map(|k| {
            let p = version(k);
            let report = verify_program(&p, d).expect("published assertions expand");
            let mut r = VersionReport {
                version: k,
                vcs: report.vcs.len(),
                all_hold: report.all_hold,
                runs: 0,
                halted: 0,
                first_stuck: None,
            };
            for n in 1..=n_max {
                for a in 1..=3 {
                    let inputs = State::new().with("n", Value::int(n)).with("a", Value::int(a));
                    let out = run(&p, &RunConfig::with_inputs(inputs.clone()));
                    r.runs += 1;
                    match out.outcome {
                        Outcome::Halted => r.halted += 1,
                        _ if r.first_stuck.is_none() => r.first_stuck = Some(inputs),
                        _ => {}
                    }
                }
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_versions_verify_but_only_the_last_is_complete() {
        let d = Domain::default().with_var_range("n", 1, 16);
        let reports = egyptian_versions(&d, 16);
        assert_eq!(reports.iter().map(|r| r.vcs).collect::<Vec<_>>(), [0, 4, 5, 9]);
        for r in &reports {
            assert!(r.all_hold, "{r:?}");
            assert_eq!(r.complete(), r.version == 4, "{r:?}");
        }
        // version 2 only finishes when n is a power of two
        assert_eq!(reports[1].halted, 5 * 3);
    }
}
