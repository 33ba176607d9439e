//! Run every corpus entry against its oracle, then survey Algorithm 63.

use liffig::corpus::{run_suite, survey_alg63, Entry, SuiteMode};

fn main() {
    for e in Entry::ALL {
        let r = run_suite(e, SuiteMode::Random { count: 500, seed: 42 });
        println!("{e}: {}/{} passed, max steps {}, notes {:?}", r.passed, r.cases, r.max_steps, r.notes);
    }
    let s = survey_alg63(5, 2);
    println!(
        "alg63 on {} cases: postcondition {}, equal elements grouped in the middle {}",
        s.cases, s.postcondition, s.all_equal_in_middle
    );
    if let Some(c) = s.first_scattered {
        println!("  first counterexample: {:?} m={} n={} f={} -> {:?}", c.array, c.m, c.n, c.f, c.result);
    }
}
