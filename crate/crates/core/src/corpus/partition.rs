//! Partitioning routines behind one interface, and independent checkers
//! for their postconditions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::{program, Entry};
use crate::interp::{Interpreter, Outcome, RunConfig};
use crate::model::{IntArray, State, Value};

/// What one partition of `a[m..n]` produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionResult {
    pub array: Vec<i64>,
    pub i: i64,
    pub j: i64,
    /// The value partitioned around (X or r).
    pub pivot: i64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("segment {m}..{n} is empty or does not fit an array of length {len}")]
    BadSegment { m: i64, n: i64, len: usize },
    #[error("{routine} did not halt: {outcome}")]
    Run { routine: &'static str, outcome: String },
    #[error("{routine} left `{var}` unset or mistyped")]
    Missing { routine: &'static str, var: &'static str },
}

/// The routines the Quicksort harness can use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    /// Direct transcription of Algorithm 63.
    Alg63,
    /// The interpreted three-way partition.
    Dnf,
    /// The interpreted Foley and Hoare partition.
    Fh,
    /// Foley and Hoare with the middle element as pivot.
    FhMedian,
}

impl Partition {
    pub const ALL: [Partition; 4] = [Partition::Alg63, Partition::Dnf, Partition::Fh, Partition::FhMedian];

    pub fn name(self) -> &'static str {
        match self {
            Partition::Alg63 => "alg63",
            Partition::Dnf => "dnf_partition",
            Partition::Fh => "fh_partition",
            Partition::FhMedian => "fh_partition_median",
        }
    }

    /// Whether the routine draws its pivot position at random.
    pub fn random_pivot(self) -> bool {
        matches!(self, Partition::Alg63 | Partition::Dnf)
    }
}

/// Runs a partition routine; interpreted ones go through a shared
/// interpreter per routine.
pub struct Partitioner {
    routine: Partition,
    interp: Option<Interpreter<'static>>,
    /// Check every label's assertion on the way (interpreted routines).
    pub check_assertions: bool,
    pub step_budget: u64,
}

impl Partitioner {
    pub fn new(routine: Partition) -> Partitioner {
        let entry = match routine {
            Partition::Alg63 => None,
            Partition::Dnf => Some(Entry::DnfPartition),
            Partition::Fh => Some(Entry::FhPartition),
            Partition::FhMedian => Some(Entry::FhPartitionMedian),
        };
        Partitioner {
            routine,
            interp: entry.map(|e| Interpreter::new(program(e)).expect("corpus assertions expand")),
            check_assertions: true,
            step_budget: crate::interp::DEFAULT_STEP_BUDGET,
        }
    }

    pub fn routine(&self) -> Partition {
        self.routine
    }

    /// Partition `a[m..n]` in place. `pivot_at` fixes the pivot position for
    /// routines that draw one; otherwise it comes from `rng`.
    pub fn partition(
        &self,
        a: &mut [i64],
        m: i64,
        n: i64,
        pivot_at: Option<i64>,
        rng: &mut ChaCha8Rng,
    ) -> Result<PartitionResult, PartitionError> {
        if m < 0 || n >= a.len() as i64 || m > n {
            return Err(PartitionError::BadSegment { m, n, len: a.len() });
        }
        let mut draw = || pivot_at.unwrap_or_else(|| rng.gen_range(m..=n));
        let routine = self.routine.name();
        let Some(interp) = &self.interp else {
            let f = draw();
            let pivot = a[f as usize];
            let (i, j) = alg63(a, m, n, f);
            return Ok(PartitionResult {
                array: a.to_vec(),
                i,
                j,
                pivot,
            });
        };
        let mut inputs = State::new()
            .with("a", Value::array(IntArray::zero_based(a.iter().copied())))
            .with("m", Value::int(m))
            .with("n", Value::int(n));
        if self.routine == Partition::Dnf {
            let f = draw();
            inputs = inputs.with("X", Value::int(a[f as usize]));
        }
        let cfg = RunConfig {
            inputs,
            step_budget: self.step_budget,
            check_assertions: self.check_assertions,
            ..RunConfig::default()
        };
        let r = interp.run(&cfg);
        if r.outcome != Outcome::Halted {
            return Err(PartitionError::Run {
                routine,
                outcome: serde_json::to_string(&r.outcome).unwrap_or_default(),
            });
        }
        let int = |var: &'static str| {
            r.state
                .get(var)
                .and_then(Value::as_int)
                .and_then(|v| v.to_i64())
                .ok_or(PartitionError::Missing { routine, var })
        };
        let out = r
            .state
            .get("a")
            .and_then(Value::as_array)
            .and_then(IntArray::to_i64_vec)
            .ok_or(PartitionError::Missing { routine, var: "a" })?;
        a.copy_from_slice(&out);
        let pivot = int(if self.routine == Partition::Dnf { "X" } else { "r" })?;
        Ok(PartitionResult {
            array: out,
            i: int("i")?,
            j: int("j")?,
            pivot,
        })
    }
}

/// Algorithm 63 (Hoare's PARTITION) as published, with its labels as
/// loop states. `f` is the pivot position the published routine draws with
/// `rndm(M, N)`. Returns (I, J).
pub fn alg63(a: &mut [i64], m: i64, n: i64, f: i64) -> (i64, i64) {
    let at = |k: i64| k as usize;
    let x = a[at(f)];
    let (mut i, mut j) = (m, n);
    #[derive(Clone, Copy)]
    enum L {
        Up,
        Down,
        Change,
    }
    let mut label = L::Up;
    loop {
        match label {
            L::Up => {
                label = L::Down;
                let mut found = false;
                while i <= n {
                    if x < a[at(i)] {
                        found = true;
                        break;
                    }
                    i += 1;
                }
                if !found {
                    i = n;
                }
            }
            L::Down => {
                label = L::Change;
                let mut found = false;
                while j >= m {
                    if x > a[at(j)] {
                        found = true;
                        break;
                    }
                    j -= 1;
                }
                if !found {
                    j = m;
                }
            }
            L::Change => {
                if i < j {
                    a.swap(at(i), at(j));
                    i += 1;
                    j -= 1;
                    label = L::Up;
                } else if i < f {
                    a.swap(at(i), at(f));
                    i += 1;
                    break;
                } else if f < j {
                    a.swap(at(f), at(j));
                    j -= 1;
                    break;
                } else {
                    break;
                }
            }
        }
    }
    (i, j)
}

/// Algorithm 63 with the pivot position drawn from `rng`.
pub fn alg63_reference(a: &[i64], m: i64, n: i64, rng: &mut ChaCha8Rng) -> PartitionResult {
    let f = rng.gen_range(m..=n);
    alg63_with_pivot(a, m, n, f)
}

/// Algorithm 63 with the pivot position fixed.
pub fn alg63_with_pivot(a: &[i64], m: i64, n: i64, f: i64) -> PartitionResult {
    let mut out = a.to_vec();
    let pivot = a[f as usize];
    let (i, j) = alg63(&mut out, m, n, f);
    PartitionResult { array: out, i, j, pivot }
}

fn segment(a: &[i64], lo: i64, hi: i64) -> &[i64] {
    let lo = lo.max(0) as usize;
    let hi = (hi + 1).clamp(0, a.len() as i64) as usize;
    if lo >= hi {
        &[]
    } else {
        &a[lo..hi]
    }
}

/// `after[m..n]` rearranges `before[m..n]` and nothing outside moved.
fn permuted_in_place(before: &[i64], after: &[i64], m: i64, n: i64) -> bool {
    if before.len() != after.len() {
        return false;
    }
    let (lo, hi) = (m.max(0) as usize, (n + 1).max(0) as usize);
    let outside_same = before[..lo] == after[..lo] && before[hi..] == after[hi..];
    let mut x = before[lo..hi].to_vec();
    let mut y = after[lo..hi].to_vec();
    x.sort_unstable();
    y.sort_unstable();
    outside_same && x == y
}

/// Algorithm 63's postcondition, clause by clause.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ThreeWayClauses {
    /// `M <= J < I <= N provided M < N`.
    pub bounds: bool,
    /// `A[R] <= X for M <= R <= J`.
    pub left: bool,
    /// `A[R] = X for J < R < I`.
    pub middle: bool,
    /// `A[R] >= X for I <= R <= N`.
    pub right: bool,
    /// The segment was rearranged and nothing else changed.
    pub perm: bool,
    /// `M - 1 <= J < I <= N + 1`: the bounds clause with the parts allowed
    /// to be empty at either end.
    pub loose_bounds: bool,
    /// The middle holds every element equal to X, and nothing else.
    pub all_equal_in_middle: bool,
}

impl ThreeWayClauses {
    /// The published postcondition: the four clauses and the permutation.
    pub fn all(&self) -> bool {
        self.bounds && self.left && self.middle && self.right && self.perm
    }

    /// Everything except the strict bounds clause.
    pub fn all_but_bounds(&self) -> bool {
        self.left && self.middle && self.right && self.perm
    }
}

pub fn three_way_clauses(before: &[i64], r: &PartitionResult, m: i64, n: i64) -> ThreeWayClauses {
    let (a, i, j, x) = (&r.array, r.i, r.j, r.pivot);
    let middle = segment(a, j + 1, i - 1);
    let pivots = segment(before, m, n).iter().filter(|&&e| e == x).count();
    ThreeWayClauses {
        bounds: m >= n || (m <= j && j < i && i <= n),
        left: segment(a, m, j).iter().all(|&e| e <= x),
        middle: middle.iter().all(|&e| e == x),
        right: segment(a, i, n).iter().all(|&e| e >= x),
        perm: permuted_in_place(before, a, m, n),
        loose_bounds: m - 1 <= j && j < i && i <= n + 1,
        all_equal_in_middle: m <= j + 1 && i - 1 <= n && middle.len() == pivots && middle.iter().all(|&e| e == x),
    }
}

/// The Foley and Hoare postcondition `a[m..j] <= r <= a[i..n]`, `j < i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwoWayClauses {
    pub left: bool,
    pub right: bool,
    pub crossed: bool,
    pub perm: bool,
}

impl TwoWayClauses {
    pub fn all(&self) -> bool {
        self.left && self.right && self.crossed && self.perm
    }
}

pub fn two_way_clauses(before: &[i64], r: &PartitionResult, m: i64, n: i64) -> TwoWayClauses {
    let a = &r.array;
    TwoWayClauses {
        left: segment(a, m, r.j).iter().all(|&e| e <= r.pivot),
        right: segment(a, r.i, n).iter().all(|&e| e >= r.pivot),
        crossed: r.j < r.i,
        perm: permuted_in_place(before, a, m, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(1)
    }

    #[test]
    fn uniform_array_under_alg63() {
        for f in 0..3 {
            let before = [1, 1, 1];
            let r = alg63_with_pivot(&before, 0, 2, f);
            assert!(three_way_clauses(&before, &r, 0, 2).all(), "{r:?}");
        }
    }

    #[test]
    fn single_element_segment() {
        let before = [5, 3, 9];
        let r = alg63_with_pivot(&before, 1, 1, 1);
        let c = three_way_clauses(&before, &r, 1, 1);
        assert!(c.left && c.middle && c.right && c.perm && c.bounds, "{r:?} {c:?}");
    }

    #[test]
    fn dnf_worked_example() {
        let p = Partitioner::new(Partition::Dnf);
        let mut a = vec![2, 0, 1];
        let r = p.partition(&mut a, 0, 2, Some(2), &mut rng()).unwrap();
        assert_eq!(r.array, [0, 1, 2]);
        assert_eq!((r.i, r.j, r.pivot), (2, 0, 1));
        let c = three_way_clauses(&[2, 0, 1], &r, 0, 2);
        assert!(c.all() && c.all_equal_in_middle);
    }

    #[test]
    fn dnf_minimum_pivot_leaves_j_below_m() {
        let p = Partitioner::new(Partition::Dnf);
        let mut a = vec![2, 0, 1];
        let r = p.partition(&mut a, 0, 2, Some(1), &mut rng()).unwrap();
        assert_eq!((r.j, r.i), (-1, 1));
        let c = three_way_clauses(&[2, 0, 1], &r, 0, 2);
        assert!(!c.bounds && c.loose_bounds && c.all_but_bounds());
    }

    #[test]
    fn fh_partitions_and_reports_its_pivot() {
        for routine in [Partition::Fh, Partition::FhMedian] {
            let p = Partitioner::new(routine);
            let before = vec![2, 0, 1, 2, 0];
            let mut a = before.clone();
            let r = p.partition(&mut a, 0, 4, None, &mut rng()).unwrap();
            assert_eq!(r.pivot, if routine == Partition::Fh { 1 } else { 1 });
            assert!(two_way_clauses(&before, &r, 0, 4).all(), "{routine:?} {r:?}");
        }
    }

    #[test]
    fn permutation_check_sees_outside_changes() {
        let r = PartitionResult {
            array: vec![9, 0, 1],
            i: 2,
            j: 1,
            pivot: 0,
        };
        assert!(!two_way_clauses(&[2, 0, 1], &r, 1, 2).perm);
    }
}
