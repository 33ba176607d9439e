//! Checked runs of a corpus entry over its exhaustive or random inputs,
//! each judged by an oracle that does not share code with the program.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::partition::{alg63_with_pivot, three_way_clauses, two_way_clauses, PartitionResult};
use super::{program, Entry, Grid};
use crate::interp::{Interpreter, Outcome, RunConfig, RunResult};
use crate::model::{Int, IntArray, State, Value};

/// Failures kept in a report; the rest are only counted.
const KEPT_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SuiteMode {
    /// Every input of the entry's exhaustive grid.
    Exhaustive,
    /// `count` inputs drawn from the random grid.
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseFailure {
    /// Position in the case list, which is deterministic per mode.
    pub index: usize,
    pub inputs: State,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub entry: Entry,
    #[serde(flatten)]
    pub mode: SuiteMode,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_steps: u64,
    /// Facts counted across cases that are not failures.
    pub notes: BTreeMap<&'static str, usize>,
    /// The first failures, in case order.
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// The inputs of a suite, in a fixed order.
pub fn cases(e: Entry, mode: SuiteMode) -> Vec<State> {
    let spec = e.inputs();
    match mode {
        SuiteMode::Exhaustive => exhaustive_cases(e, &spec.exhaustive),
        SuiteMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_case(e, &spec.random, &mut rng)).collect()
        }
    }
}

fn scalar_pair(e: Entry, n: i64, a: i64) -> State {
    let a = match e {
        Entry::Egyptian => Value::Float(a as f64),
        _ => Value::int(a),
    };
    State::new().with("n", Value::int(n)).with("a", a)
}

fn segment_case(e: Entry, a: &[i64], m: i64, n: i64, f: i64) -> State {
    let s = State::new()
        .with("a", Value::array(IntArray::zero_based(a.iter().copied())))
        .with("m", Value::int(m))
        .with("n", Value::int(n));
    match e {
        Entry::DnfPartition => s.with("X", Value::int(a[f as usize])),
        _ => s,
    }
}

/// Smallest segment length the entry accepts: the FH routines need m < n.
fn min_segment(e: Entry) -> i64 {
    match e {
        Entry::DnfPartition => 1,
        _ => 2,
    }
}

fn exhaustive_cases(e: Entry, g: &Grid) -> Vec<State> {
    let mut out = Vec::new();
    match e {
        Entry::Egyptian | Entry::Fastexp => {
            let (nlo, nhi) = g.range("n");
            let (alo, ahi) = g.range("a");
            for n in nlo..=nhi {
                for a in alo..=ahi {
                    out.push(scalar_pair(e, n, a));
                }
            }
        }
        _ => {
            let (llo, lhi) = g.array_len.unwrap_or((1, 4));
            let (elo, ehi) = g.elem_range.unwrap_or((0, 2));
            let min = min_segment(e);
            for len in llo..=lhi {
                for a in arrays(len, elo, ehi) {
                    let len = len as i64;
                    for m in 0..len {
                        for n in (m + min - 1)..len {
                            // every pivot position for DNF, one run otherwise
                            let pivots = if e == Entry::DnfPartition { m..=n } else { m..=m };
                            for f in pivots {
                                out.push(segment_case(e, &a, m, n, f));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn arrays(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn random_case(e: Entry, g: &Grid, rng: &mut ChaCha8Rng) -> State {
    match e {
        Entry::Egyptian | Entry::Fastexp => {
            let (nlo, nhi) = g.range("n");
            let (alo, ahi) = g.range("a");
            scalar_pair(e, rng.gen_range(nlo..=nhi), rng.gen_range(alo..=ahi))
        }
        _ => {
            let min = min_segment(e) as usize;
            let (llo, lhi) = g.array_len.unwrap_or((min, 36));
            let (elo, ehi) = g.elem_range.unwrap_or((0, 99));
            let len = rng.gen_range(llo.max(min)..=lhi.max(min));
            let a: Vec<i64> = (0..len).map(|_| rng.gen_range(elo..=ehi)).collect();
            let m = rng.gen_range(0..=len - min) as i64;
            let n = rng.gen_range(m + min as i64 - 1..len as i64);
            let f = rng.gen_range(m..=n);
            segment_case(e, &a, m, n, f)
        }
    }
}

/// Run every case of the suite with assertion checking on.
pub fn run_suite(e: Entry, mode: SuiteMode) -> SuiteReport {
    let inputs = cases(e, mode);
    let interp = Interpreter::new(program(e)).expect("corpus assertions expand");
    let verdicts: Vec<Verdict> = inputs.par_iter().map(|s| judge(e, &interp, s)).collect();

    let mut report = SuiteReport {
        entry: e,
        mode,
        cases: inputs.len(),
        passed: 0,
        failed: 0,
        max_steps: 0,
        notes: BTreeMap::new(),
        failures: Vec::new(),
    };
    for (index, (v, s)) in verdicts.into_iter().zip(inputs).enumerate() {
        report.max_steps = report.max_steps.max(v.steps);
        for n in v.notes {
            *report.notes.entry(n).or_default() += 1;
        }
        match v.failure {
            None => report.passed += 1,
            Some(detail) => {
                report.failed += 1;
                if report.failures.len() < KEPT_FAILURES {
                    report.failures.push(CaseFailure {
                        index,
                        inputs: s,
                        detail,
                    });
                }
            }
        }
    }
    report
}

#[derive(Default)]
struct Verdict {
    steps: u64,
    notes: Vec<&'static str>,
    failure: Option<String>,
}

fn judge(e: Entry, interp: &Interpreter<'_>, s: &State) -> Verdict {
    let run = |inputs: State| interp.run(&RunConfig::with_inputs(inputs));
    let r = run(s.clone());
    let mut v = Verdict {
        steps: r.steps,
        ..Verdict::default()
    };
    if r.outcome != Outcome::Halted {
        v.failure = Some(format!("run ended {}", serde_json::to_string(&r.outcome).unwrap_or_default()));
        return v;
    }
    let checked = match e {
        Entry::Egyptian => check_egyptian(s, &r),
        Entry::Fastexp => check_fastexp(s, &r),
        Entry::DnfPartition => check_dnf(s, &r, &mut v.notes),
        Entry::FhPartition | Entry::FhPartitionMedian => check_fh(e, s, &r).and_then(|()| {
            // Sentinel: the same run on an array that holds only a[m..n]
            // must never index outside it.
            let (a, m, n) = segment_inputs(s).ok_or("inputs are not a segment")?;
            let slice = IntArray::new(m, a[m as usize..=n as usize].iter().map(|&x| Int::from(x)).collect());
            let bounded = run(s.clone().with("a", Value::array(slice)));
            if bounded.outcome != Outcome::Halted {
                return Err(format!(
                    "reads outside a[m..n]: {}",
                    serde_json::to_string(&bounded.outcome).unwrap_or_default()
                ));
            }
            let full = ints(&r.state, "a").ok_or("no array")?;
            let seg = ints(&bounded.state, "a").ok_or("no array")?;
            if seg != full[m as usize..=n as usize] || int(&bounded.state, "i") != int(&r.state, "i") {
                return Err("the bounded run partitions differently".into());
            }
            Ok(())
        }),
    };
    v.failure = checked.err();
    v
}

fn int(s: &State, var: &str) -> Option<i64> {
    s.get(var)?.as_int()?.to_i64()
}

fn ints(s: &State, var: &str) -> Option<Vec<i64>> {
    s.get(var)?.as_array()?.to_i64_vec()
}

fn segment_inputs(s: &State) -> Option<(Vec<i64>, i64, i64)> {
    Some((ints(s, "a")?, int(s, "m")?, int(s, "n")?))
}

fn floor_log2(n: i64) -> u64 {
    63 - n.max(1).leading_zeros() as u64
}

fn check_egyptian(s: &State, r: &RunResult) -> Result<(), String> {
    let n = int(s, "n").ok_or("no n")?;
    let a = match s.get("a") {
        Some(Value::Float(a)) => *a,
        other => return Err(format!("a is {other:?}")),
    };
    let expected = Value::Float(n as f64 * a);
    match r.state.out() {
        [x] if x.semantic_eq(&expected) == Some(true) => {}
        out => return Err(format!("printed {out:?}, expected [{expected}]")),
    }
    let adds = r.trace.counters.additions;
    if adds > 2 * floor_log2(n) {
        return Err(format!("{adds} additions for n = {n}"));
    }
    Ok(())
}

fn check_fastexp(s: &State, r: &RunResult) -> Result<(), String> {
    let n = int(s, "n").ok_or("no n")?;
    let a = int(s, "a").ok_or("no a")?;
    let mut expected = Int::from(1);
    for _ in 0..n {
        expected = expected.mul(&Int::from(a));
    }
    match r.state.out() {
        [Value::Int(x)] if *x == expected => {}
        out => return Err(format!("printed {out:?}, expected [{expected}]")),
    }
    let muls = r.trace.counters.multiplications;
    if muls > 2 * floor_log2(n) {
        return Err(format!("{muls} multiplications for n = {n}"));
    }
    Ok(())
}

fn result_of(r: &RunResult, pivot_var: &str) -> Result<PartitionResult, String> {
    Ok(PartitionResult {
        array: ints(&r.state, "a").ok_or("no array")?,
        i: int(&r.state, "i").ok_or("i unset")?,
        j: int(&r.state, "j").ok_or("j unset")?,
        pivot: int(&r.state, pivot_var).ok_or("no pivot")?,
    })
}

fn check_dnf(s: &State, r: &RunResult, notes: &mut Vec<&'static str>) -> Result<(), String> {
    let (before, m, n) = segment_inputs(s).ok_or("inputs are not a segment")?;
    let res = result_of(r, "X")?;
    let c = three_way_clauses(&before, &res, m, n);
    if !c.bounds {
        notes.push("strict_bounds_clause_false");
    }
    if !(c.all_but_bounds() && c.loose_bounds && c.all_equal_in_middle) {
        return Err(format!("{c:?} for {res:?}"));
    }
    Ok(())
}

fn check_fh(e: Entry, s: &State, r: &RunResult) -> Result<(), String> {
    let (before, m, n) = segment_inputs(s).ok_or("inputs are not a segment")?;
    let res = result_of(r, "r")?;
    let (mu, nu) = (m as usize, n as usize);
    let pivot = match e {
        Entry::FhPartitionMedian => before[(mu + nu) / 2],
        _ => (before[mu] + before[nu]) / 2,
    };
    if res.pivot != pivot {
        return Err(format!("pivot {} instead of {pivot}", res.pivot));
    }
    let c = two_way_clauses(&before, &res, m, n);
    if !c.all() || res.i != res.j + 1 {
        return Err(format!("{c:?} for {res:?}"));
    }
    Ok(())
}

/// How Algorithm 63 behaves on every array of a small domain, every
/// segment and every pivot position.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Alg63Survey {
    pub cases: usize,
    /// The four clauses and the permutation all hold.
    pub postcondition: usize,
    /// Cases with the segment clauses and permutation, ignoring the bounds.
    pub clauses_but_bounds: usize,
    /// The middle part holds exactly the elements equal to the pivot.
    pub all_equal_in_middle: usize,
    /// The first case with m < n where some pivot-equal element lies outside
    /// the middle.
    pub first_scattered: Option<Alg63Case>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alg63Case {
    pub array: Vec<i64>,
    pub m: i64,
    pub n: i64,
    /// Pivot position.
    pub f: i64,
    pub result: PartitionResult,
}

pub fn survey_alg63(max_len: usize, elem_hi: i64) -> Alg63Survey {
    let mut s = Alg63Survey::default();
    for len in 1..=max_len {
        for a in arrays(len, 0, elem_hi) {
            let len = len as i64;
            for m in 0..len {
                for n in m..len {
                    for f in m..=n {
                        let r = alg63_with_pivot(&a, m, n, f);
                        let c = three_way_clauses(&a, &r, m, n);
                        s.cases += 1;
                        s.postcondition += c.all() as usize;
                        s.clauses_but_bounds += c.all_but_bounds() as usize;
                        if c.all_equal_in_middle {
                            s.all_equal_in_middle += 1;
                        } else if m < n && s.first_scattered.is_none() {
                            s.first_scattered = Some(Alg63Case {
                                array: a.clone(),
                                m,
                                n,
                                f,
                                result: r,
                            });
                        }
                    }
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_suites_pass() {
        for e in Entry::ALL {
            let r = run_suite(e, SuiteMode::Random { count: 200, seed: 3 });
            assert!(r.ok(), "{e}: {:?}", r.failures.first());
            assert_eq!(r.cases, 200);
        }
    }

    #[test]
    fn case_lists_are_deterministic() {
        let mode = SuiteMode::Random { count: 50, seed: 9 };
        assert_eq!(cases(Entry::FhPartition, mode), cases(Entry::FhPartition, mode));
        assert_eq!(cases(Entry::Egyptian, SuiteMode::Exhaustive).len(), 512 * 17);
    }

    #[test]
    fn a_failing_oracle_is_reported() {
        let r = RunResult {
            outcome: Outcome::Halted,
            state: State::new(),
            steps: 0,
            trace: Default::default(),
        };
        let s = scalar_pair(Entry::Fastexp, 3, 2);
        assert!(check_fastexp(&s, &r).unwrap_err().contains("expected [8]"));
    }
}
