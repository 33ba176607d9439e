//! Transcribe the Foley and Hoare partition into C with the published
//! signature, and compile and cross-check it when a C compiler exists.

use liffig::corpus::native::compare_with_c;
use liffig::corpus::{program, Entry, SuiteMode};
use liffig::transpile::{c_compiler, transpile};

fn main() {
    let e = Entry::FhPartition;
    let c = transpile(program(e), &e.transpile_config()).expect("the corpus transcribes");
    println!("{c}");
    if c_compiler().is_none() {
        println!("no C compiler found, skipping the native comparison");
        return;
    }
    match compare_with_c(e, SuiteMode::Random { count: 200, seed: 1 }) {
        Ok(a) => println!("compiled C agrees on {}/{} inputs", a.agreed, a.cases),
        Err(err) => println!("compile failed: {err}"),
    }
}
