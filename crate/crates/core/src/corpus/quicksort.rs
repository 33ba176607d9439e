//! The Quicksort recursion skeleton over any of the partition routines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::partition::{PartitionError, Partitioner};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SortError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    /// A part as long as the whole segment would recurse forever.
    #[error("partition of {m}..{n} returned i = {i}, j = {j}, which does not shrink the segment")]
    NoProgress { m: i64, n: i64, i: i64, j: i64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SortStats {
    pub partitions: u64,
    pub max_depth: u32,
}

/// Sort `a[m..n]`: partition, then sort `a[m..j]` and `a[i..n]`. Pivot
/// positions come from a generator seeded with `seed`.
pub fn quicksort(a: &mut [i64], m: i64, n: i64, p: &Partitioner, seed: u64) -> Result<SortStats, SortError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SortStats::default();
    sort(a, m, n, p, &mut rng, &mut stats, 1)?;
    Ok(stats)
}

fn sort(
    a: &mut [i64],
    m: i64,
    n: i64,
    p: &Partitioner,
    rng: &mut ChaCha8Rng,
    stats: &mut SortStats,
    depth: u32,
) -> Result<(), SortError> {
    if m >= n {
        return Ok(());
    }
    stats.max_depth = stats.max_depth.max(depth);
    stats.partitions += 1;
    let r = p.partition(a, m, n, None, rng)?;
    let (i, j) = (r.i, r.j);
    if j >= n || i <= m {
        return Err(SortError::NoProgress { m, n, i, j });
    }
    sort(a, m, j, p, rng, stats, depth + 1)?;
    sort(a, i, n, p, rng, stats, depth + 1)
}

/// Sort a whole array with `p`, returning the sorted copy.
pub fn sorted_with(a: &[i64], p: &Partitioner, seed: u64) -> Result<Vec<i64>, SortError> {
    let mut v = a.to_vec();
    if !v.is_empty() {
        let n = v.len() as i64 - 1;
        quicksort(&mut v, 0, n, p, seed)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::partition::Partition;

    #[test]
    fn every_routine_sorts_a_small_array() {
        let input = [5, 3, 9, 3, 0, 7, 1, 1];
        let mut want = input.to_vec();
        want.sort();
        for routine in Partition::ALL {
            let p = Partitioner::new(routine);
            assert_eq!(sorted_with(&input, &p, 7).unwrap(), want, "{routine:?}");
        }
    }

    #[test]
    fn degenerate_inputs() {
        for routine in Partition::ALL {
            let p = Partitioner::new(routine);
            assert_eq!(sorted_with(&[], &p, 0).unwrap(), Vec::<i64>::new());
            assert_eq!(sorted_with(&[4], &p, 0).unwrap(), [4]);
            assert_eq!(sorted_with(&[2, 2, 2, 2], &p, 0).unwrap(), [2, 2, 2, 2]);
        }
    }
}
