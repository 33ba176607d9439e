//! Bits gained by a partition step that splits n elements r : n - r.

use liffig::corpus::info::{argmax_split, info_yield, info_yield_ratio};

fn main() {
    let n = 16;
    for r in 0..=n {
        println!("r = {r:>2}: {:.3} bits", info_yield(n, r).expect("r <= n"));
    }
    println!("best split of {n}: {:?}", argmax_split(n));
    for n in [10, 1000, 100_000] {
        println!("median split over mean split, n = {n}: {:.6}", info_yield_ratio(n));
    }
    println!("2 ln 2 = {:.6}", 2.0 * std::f64::consts::LN_2);
}
