//! Acceptance criteria 1 to 8, one pass/fail line each. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.
//!
//! Criterion 4 asks for the strict bounds clause `M <= J < I <= N` on
//! every DNF run. The three-way partition leaves J = M - 1 or I = N + 1
//! whenever the pivot is the segment's minimum or maximum, so that line
//! reports FAIL. Everything else in the criterion is asserted.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liffig::corpus::info::{argmax_split, info_yield, info_yield_ratio};
use liffig::corpus::native::compare_with_c;
use liffig::corpus::partition::{three_way_clauses, two_way_clauses, Partition, Partitioner};
use liffig::corpus::quicksort::{quicksort, SortError};
use liffig::corpus::sources::published;
use liffig::corpus::{mutant, program, Entry, SuiteMode};
use liffig::interp::{Interpreter, Outcome, RunConfig};
use liffig::model::{State, Value};
use liffig::transpile::{c_compiler, function_text, normal_lines, sections, transpile};
use liffig::verify::{
    all_states, extract_vcs, extensionally_equal, fixpoint_check, matrix_of, refute, verify_program, CodeMatrix,
    Domain, Mode, Status, VcReport,
};

struct Verdict {
    pass: bool,
    detail: String,
    elapsed: Duration,
}

/// Written to the stdout handle rather than with `println!`, so the lines
/// show up even when the harness captures test output.
fn report(n: u32, v: &Verdict) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "criterion {n}: {} ({:.1} s) {}",
        if v.pass { "PASS" } else { "FAIL" },
        v.elapsed.as_secs_f64(),
        v.detail
    );
}

fn timed(f: impl FnOnce() -> (bool, String)) -> Verdict {
    let t = Instant::now();
    let (pass, detail) = f();
    Verdict {
        pass,
        detail,
        elapsed: t.elapsed(),
    }
}

fn floor_log2(n: i64) -> u64 {
    63 - n.leading_zeros() as u64
}

fn arrays(len: usize, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn permutations(v: Vec<i64>) -> Vec<Vec<i64>> {
    if v.len() <= 1 {
        return vec![v];
    }
    let mut out = Vec::new();
    for k in 0..v.len() {
        let mut rest = v.clone();
        let x = rest.remove(k);
        for mut p in permutations(rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn egyptian() -> (bool, String) {
    let interp = Interpreter::new(program(Entry::Egyptian)).unwrap();
    let mut failures = Vec::new();
    let mut eight = None;
    let mut runs = 0;
    for n in 1..=512i64 {
        for a in [1i64, 2, 3, 5] {
            let inputs = State::new().with("n", Value::int(n)).with("a", Value::Float(a as f64));
            let r = interp.run(&RunConfig::with_inputs(inputs));
            runs += 1;
            let adds = r.trace.counters.additions;
            let ok = r.outcome == Outcome::Halted
                && matches!(r.state.out(), [Value::Float(x)] if *x == (n * a) as f64)
                && adds <= 2 * floor_log2(n);
            if !ok {
                failures.push((n, a));
            }
            if n == 8 {
                eight.get_or_insert(adds);
                if eight != Some(adds) {
                    failures.push((n, a));
                }
            }
        }
    }
    let pass = failures.is_empty() && eight == Some(3);
    (
        pass,
        format!(
            "{runs} checked runs, {} wrong; additions for n = 8: {}",
            failures.len(),
            eight.unwrap_or(0)
        ),
    )
}

fn vc_discharge() -> (bool, String) {
    let mut parts = Vec::new();
    let mut pass = true;
    for e in [Entry::Egyptian, Entry::DnfPartition, Entry::FhPartition] {
        let d = &e.inputs().verify;
        let t = Instant::now();
        let r = verify_program(program(e), d).unwrap();
        let exhaustive = r.vcs.iter().all(|v| v.mode == Mode::Exhaustive);
        let holds = r.vcs.iter().filter(|v| v.status == Status::Holds).count();
        pass &= r.all_hold && exhaustive;
        parts.push(format!(
            "{e} {holds}/{} hold{} in {:.1} s",
            r.vcs.len(),
            if exhaustive { " exhaustively" } else { " (sampled)" },
            t.elapsed().as_secs_f64()
        ));
    }
    (pass, parts.join("; "))
}

/// Verify each mutant on its entry's small fixpoint domain.
fn mutant_reports() -> Vec<(Entry, &'static str, VcReport)> {
    let mut out = Vec::new();
    for e in Entry::ALL {
        for (kind, _) in e.mutants() {
            let p = mutant(e, kind).unwrap().unwrap();
            out.push((e, *kind, verify_program(&p, &e.inputs().fixpoint).unwrap()));
        }
    }
    out
}

fn mutation(reports: &[(Entry, &'static str, VcReport)]) -> (bool, String) {
    let mut caught = 0;
    let mut missed = Vec::new();
    for (e, kind, r) in reports {
        let p = mutant(*e, kind).unwrap().unwrap();
        let q = if r.instantiated { p.int_instantiation() } else { p };
        let vcs = extract_vcs(&q).unwrap();
        // a witness counts only if replaying it refutes the VC again
        let replayed = r.refuted().any(|v| {
            let vc = vcs.iter().find(|c| c.id() == v.vc_id).unwrap();
            v.witness.as_ref().is_some_and(|w| refute(&q.signature, vc, &w.pre).is_some())
        });
        if replayed {
            caught += 1;
        } else {
            missed.push(format!("{e}/{kind}"));
        }
    }
    let pass = missed.is_empty() && reports.len() == 3 * Entry::ALL.len();
    (pass, format!("{caught}/{} mutants refuted with a replayable witness; missed {missed:?}", reports.len()))
}

/// (strict criterion, everything but the strict bounds clause, detail)
fn partitions() -> (bool, bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let dnf = Partitioner::new(Partition::Dnf);
    let (mut cases, mut all_four, mut rest, mut grouped, mut bounds_false) = (0, 0, 0, 0, 0);
    for len in 1..=6 {
        for a in arrays(len, 2) {
            let len = len as i64;
            for m in 0..len {
                for n in m..len {
                    for f in m..=n {
                        let mut work = a.clone();
                        let r = dnf.partition(&mut work, m, n, Some(f), &mut rng).unwrap();
                        let c = three_way_clauses(&a, &r, m, n);
                        cases += 1;
                        all_four += c.all() as usize;
                        rest += c.all_but_bounds() as usize;
                        grouped += c.all_equal_in_middle as usize;
                        bounds_false += !c.bounds as usize;
                    }
                }
            }
        }
    }
    let fh = Partitioner::new(Partition::Fh);
    let (mut fh_cases, mut fh_ok) = (0, 0);
    for len in 2..=6 {
        for a in arrays(len, 2) {
            let len = len as i64;
            for m in 0..len {
                for n in m + 1..len {
                    let mut work = a.clone();
                    let r = fh.partition(&mut work, m, n, None, &mut rng).unwrap();
                    fh_cases += 1;
                    fh_ok += two_way_clauses(&a, &r, m, n).all() as usize;
                }
            }
        }
    }
    let fh_pass = fh_ok == fh_cases;
    let strict = all_four == cases && grouped == cases && fh_pass;
    let attainable = rest == cases && grouped == cases && fh_pass;
    let detail = format!(
        "dnf_partition: {all_four}/{cases} satisfy all four clauses and perm (strict bounds clause false in \
         {bounds_false}, where the pivot is the segment's minimum or maximum); {rest}/{cases} satisfy the \
         other three clauses and perm; {grouped}/{cases} hold exactly the pivot-equal elements in the middle; \
         fh_partition: {fh_ok}/{fh_cases} satisfy a[m..j] <= r <= a[i..n], j < i, perm"
    );
    (strict, attainable, detail)
}

fn quicksorts() -> (bool, String) {
    let routines = [Partition::Alg63, Partition::Dnf, Partition::Fh];
    let perms = permutations((0..7).collect());
    let mut wrong = Vec::new();
    let mut sorted_count = 0;
    let mut partitions_max = 0;
    for routine in routines {
        let p = Partitioner::new(routine);
        let mut check = |a: &[i64], seed: u64| {
            let mut work = a.to_vec();
            let mut expected = a.to_vec();
            expected.sort();
            match quicksort(&mut work, 0, a.len() as i64 - 1, &p, seed) {
                Ok(stats) if work == expected => {
                    sorted_count += 1;
                    partitions_max = partitions_max.max(stats.partitions);
                }
                Ok(_) => wrong.push(format!("{} on {a:?}: unsorted", routine.name())),
                Err(SortError::Partition(e)) => wrong.push(format!("{} on {a:?}: {e}", routine.name())),
                Err(e) => wrong.push(format!("{} on {a:?}: {e}", routine.name())),
            }
        };
        for (k, a) in perms.iter().enumerate() {
            check(a, k as u64);
        }
        for seed in 0..1000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<i64> = (0..36).map(|_| rng.gen_range(0..=99)).collect();
            check(&a, seed);
        }
        check(&(0..36).collect::<Vec<_>>(), 1);
        check(&[7; 36], 1);
    }
    let expected = routines.len() * (perms.len() + 1002);
    (
        wrong.is_empty() && sorted_count == expected,
        format!(
            "{sorted_count}/{expected} sorts agree with the standard sort (alg63, dnf_partition, fh_partition; \
             5040 permutations, 1000 random length-36 arrays, sorted and all-equal); first problem {:?}",
            wrong.first()
        ),
    )
}

fn matrices(reports: &[(Entry, &'static str, VcReport)]) -> (bool, String) {
    let p = program(Entry::Egyptian).int_instantiation();
    let d = Domain {
        int_range: (-2, 2),
        ..Domain::default()
    }
    .with_var_range("n", 1, 6);
    let inputs = all_states(&p.signature, &d);
    let sig = &p.signature;
    let m = matrix_of(&p);
    let i = CodeMatrix::identity(p.labels());
    let m2 = m.product(&m).unwrap();
    let laws = extensionally_equal(sig, &m.product(&i).unwrap(), &m, &inputs)
        && extensionally_equal(sig, &i.product(&m).unwrap(), &m, &inputs)
        && extensionally_equal(sig, &m.product(&m2).unwrap(), &m2.product(&m).unwrap(), &inputs);

    let mut agree = 0;
    let mut disagree = Vec::new();
    let mut check = |name: String, prog: &liffig::model::Program, d: &Domain, verified: bool| {
        let f = fixpoint_check(prog, d).unwrap();
        if f.contained == verified {
            agree += 1;
        } else {
            disagree.push(name);
        }
    };
    for e in Entry::ALL {
        let d = &e.inputs().fixpoint;
        let verified = verify_program(program(e), d).unwrap().all_hold;
        check(e.name().to_string(), program(e), d, verified);
    }
    for (e, kind, r) in reports {
        let prog = mutant(*e, kind).unwrap().unwrap();
        check(format!("{e}/{kind}"), &prog, &e.inputs().fixpoint, r.all_hold);
    }
    let total = Entry::ALL.len() + reports.len();
    (
        laws && disagree.is_empty(),
        format!(
            "identity and associativity {} on {} states; fixpoint containment agrees with verify on {agree}/{total} \
             programs and mutants; disagreements {disagree:?}",
            if laws { "hold" } else { "fail" },
            inputs.len()
        ),
    )
}

/// log2 C(n, r) from running sums of log2 k, sharing nothing with the
/// log-gamma route.
fn log2_binomials(n: u64) -> Vec<f64> {
    let mut lf = vec![0.0f64; n as usize + 1];
    for k in 1..=n as usize {
        lf[k] = lf[k - 1] + (k as f64).log2();
    }
    (0..=n as usize).map(|r| lf[n as usize] - lf[r] - lf[n as usize - r]).collect()
}

/// ratio(10^5) from a 30-digit sweep of log2 C(n, r), taken before the
/// tolerance below was set.
const RATIO_1E5: f64 = 1.386_332_077_008_681_7;

fn information() -> (bool, String) {
    let mut bad = Vec::new();
    for n in 1..=1000u64 {
        let args = argmax_split(n);
        if !args.contains(&(n / 2)) || args.iter().any(|&r| r != n / 2 && r != n - n / 2) {
            bad.push(n);
        }
    }
    let n = 100_000;
    let ratio = info_yield_ratio(n);
    let sums = log2_binomials(n);
    let independent = sums[n as usize / 2] / (sums[1..].iter().sum::<f64>() / n as f64);
    let spot = (info_yield(n, 12_345).unwrap() - sums[12_345]).abs();
    let pass = bad.is_empty() && (ratio - 1.386).abs() <= 0.03 && (ratio - RATIO_1E5).abs() < 1e-9
        && (independent - ratio).abs() < 1e-9 && spot < 1e-6;
    (
        pass,
        format!(
            "argmax is n/2 for every n <= 1000 (exceptions {bad:?}); ratio(10^5) = {ratio:.6} against \
             the independent sweep's {independent:.6} and the reference {RATIO_1E5:.6}"
        ),
    )
}

fn transpiler() -> (bool, String) {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut golden_ok = true;
    for e in [Entry::DnfPartition, Entry::FhPartition] {
        let ours = transpile(program(e), &e.transpile_config()).unwrap();
        let path = root.join(e.name()).join("golden").join(format!("{}.c", e.name()));
        let golden = std::fs::read_to_string(path).unwrap_or_default();
        golden_ok &= normal_lines(&ours) == normal_lines(&golden);
    }
    let fh = transpile(program(Entry::FhPartition), &Entry::FhPartition.transpile_config()).unwrap();
    let fh_ok = normal_lines(function_text(&fh, "partition").unwrap())
        == normal_lines(function_text(published::FH_C, "partition").unwrap());
    let dnf = transpile(program(Entry::DnfPartition), &Entry::DnfPartition.transpile_config()).unwrap();
    let ours = sections(function_text(&dnf, "partition").unwrap());
    let theirs = sections(function_text(published::DNF_C, "partition").unwrap());
    let dnf_ok = ["A", "B"].iter().all(|l| {
        let find = |s: &[liffig::transpile::Section]| s.iter().find(|x| x.label == *l).cloned();
        find(&ours).is_some() && find(&ours) == find(&theirs)
    });
    let mut detail = format!(
        "golden files {}; fh_partition matches the published routine {}; dnf_partition sections A and B {}",
        if golden_ok { "match" } else { "differ" },
        if fh_ok { "line for line" } else { "NOT line for line" },
        if dnf_ok { "match" } else { "differ" }
    );
    let mut native_ok = true;
    if c_compiler().is_some() {
        for e in [Entry::DnfPartition, Entry::FhPartition] {
            match compare_with_c(e, SuiteMode::Exhaustive) {
                Ok(a) => {
                    native_ok &= a.ok() && a.skipped == 0;
                    detail += &format!("; {e} compiled agrees on {}/{} exhaustive inputs", a.agreed, a.cases);
                }
                Err(err) => {
                    native_ok = false;
                    detail += &format!("; {e} compiled run failed: {err}");
                }
            }
        }
    } else {
        detail += "; no C compiler, golden files stand in";
    }
    (golden_ok && fh_ok && dnf_ok && native_ok, detail)
}

#[test]
fn acceptance() {
    let c1 = timed(egyptian);
    report(1, &c1);
    let c2 = timed(vc_discharge);
    report(2, &c2);
    let t = Instant::now();
    let reports = mutant_reports();
    let mutants_time = t.elapsed();
    let mut c3 = timed(|| mutation(&reports));
    c3.elapsed += mutants_time;
    report(3, &c3);
    let mut attainable4 = false;
    let c4 = timed(|| {
        let (strict, attainable, detail) = partitions();
        attainable4 = attainable;
        (strict, detail)
    });
    report(4, &c4);
    let c5 = timed(quicksorts);
    report(5, &c5);
    let c6 = timed(|| matrices(&reports));
    report(6, &c6);
    let c7 = timed(information);
    report(7, &c7);
    let c8 = timed(transpiler);
    report(8, &c8);

    let limits = [
        (1, &c1, 5.0),
        (2, &c2, 60.0),
        (5, &c5, 60.0),
        (7, &c7, 10.0),
    ];
    for (n, v, secs) in limits {
        assert!(v.elapsed.as_secs_f64() < secs, "criterion {n} took {:?}", v.elapsed);
    }
    for (n, v) in [(1, &c1), (2, &c2), (3, &c3), (5, &c5), (6, &c6), (7, &c7), (8, &c8)] {
        assert!(v.pass, "criterion {n}: {}", v.detail);
    }
    // Criterion 4 fails on the strict bounds clause alone; the rest of it
    // must hold.
    assert!(attainable4, "criterion 4: {}", c4.detail);
}
