//! Sort with Quicksort over each partition routine and compare the work done.

use liffig::corpus::partition::{Partition, Partitioner};
use liffig::corpus::quicksort::quicksort;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let input: Vec<i64> = (0..36).map(|_| rng.gen_range(0..=9)).collect();
    for routine in Partition::ALL {
        let p = Partitioner::new(routine);
        let mut a = input.clone();
        let n = a.len() as i64 - 1;
        let stats = quicksort(&mut a, 0, n, &p, 3).expect("sorts");
        assert!(a.windows(2).all(|w| w[0] <= w[1]));
        println!("{:>12}: {stats:?}", routine.name());
    }
}
