use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::interp::{eval_formula, eval_term};
use crate::model::{BinOp, Formula, Ident, Int, IntArray, Rel, State, Term, Type, Value};

pub const DEFAULT_CAP: u64 = 2_000_000;
pub const DEFAULT_SAMPLES: u64 = 20_000;
/// Partial bindings allowed per complete state before the walk is treated
/// as over the cap, so a space that prunes late still terminates.
const VISITS_PER_STATE: u64 = 32;

/// A finite slice of the state space. Arrays are zero-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Domain {
    /// Range of every scalar without an entry in `var_ranges`.
    pub int_range: (i64, i64),
    /// Per-variable scalar ranges. A ghost without an entry uses its base's.
    pub var_ranges: BTreeMap<String, (i64, i64)>,
    pub array_len: (usize, usize),
    pub elem_range: (i64, i64),
    /// Most complete states enumerated before falling back to sampling.
    pub cap: u64,
    /// States drawn in sampled mode.
    pub samples: u64,
    pub seed: u64,
}

impl Default for Domain {
    fn default() -> Self {
        Domain {
            int_range: (-8, 8),
            var_ranges: BTreeMap::new(),
            array_len: (0, 4),
            elem_range: (0, 2),
            cap: DEFAULT_CAP,
            samples: DEFAULT_SAMPLES,
            seed: crate::interp::DEFAULT_SEED,
        }
    }
}

impl Domain {
    pub fn with_var_range(mut self, name: &str, lo: i64, hi: i64) -> Domain {
        self.var_ranges.insert(name.to_string(), (lo, hi));
        self
    }

    pub fn range_of(&self, name: &Ident) -> (i64, i64) {
        if let Some(r) = self.var_ranges.get(name.as_str()) {
            return *r;
        }
        if let Some(r) = name.ghost_base().and_then(|b| self.var_ranges.get(b)) {
            return *r;
        }
        self.int_range
    }

    /// Every array in the domain, by length and then lexicographically.
    pub fn arrays(&self) -> Vec<Value> {
        let (elo, ehi) = self.elem_range;
        let mut out = Vec::new();
        for len in self.array_len.0..=self.array_len.1 {
            if elo > ehi && len > 0 {
                break;
            }
            let mut cur = vec![elo; len];
            loop {
                out.push(Value::array(IntArray::zero_based(cur.iter().copied())));
                // odometer increment, last position fastest
                let mut k = len;
                while k > 0 && cur[k - 1] == ehi {
                    cur[k - 1] = elo;
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                cur[k - 1] += 1;
            }
        }
        out
    }

    fn contains_array(&self, a: &IntArray) -> bool {
        a.lo() == 0
            && (self.array_len.0..=self.array_len.1).contains(&a.len())
            && a.elems()
                .iter()
                .all(|e| *e >= Int::from(self.elem_range.0) && *e <= Int::from(self.elem_range.1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// What an enumeration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub mode: Mode,
    /// Candidate bindings tried, including ones pruned immediately.
    pub visited: u64,
    /// States satisfying the formula handed to the callback.
    pub satisfying: u64,
    /// Complete states where the formula could not be evaluated (and no
    /// conjunct was false). They are not handed out.
    pub undefined: u64,
}

/// How to propose values for one variable given the ones bound before it.
enum Gen<'a> {
    /// `x = y` for arrays.
    Copy(Ident),
    /// `perm(x, y)`.
    PermOf(Ident),
    /// `known = unknown` with `x` occurring once in `unknown`.
    Solve { known: &'a Term, unknown: &'a Term },
    /// `unknown rel known` with `x` occurring once in `unknown`.
    Bound { rel: Rel, known: &'a Term, unknown: &'a Term },
    /// `alloc(a, x, hi)` or `alloc(a, lo, x)`; the other end may be unbound.
    Alloc { array: Ident, other: &'a Term, x_is_lo: bool },
    /// `seg(a, lo, hi, rel, x)`: every element `e` in range gives `e rel x`.
    Seg { array: Ident, lo: &'a Term, hi: &'a Term, rel: Rel },
}

enum Stop {
    Cap,
    Done,
}

/// The states over `vars` that satisfy `f`, produced variable by variable.
/// Each conjunct of `f` is tested as soon as its variables are bound, and
/// equalities, comparisons, `perm`, `alloc` and segment bounds narrow the
/// candidates. Variables are bound in declaration order, except that one
/// with a narrowing conjunct available goes before one without.
pub struct StateSpace<'a> {
    vars: Vec<(Ident, Type)>,
    gens: Vec<Vec<Gen<'a>>>,
    checks: Vec<Vec<&'a Formula>>,
    closed: Vec<&'a Formula>,
    domain: &'a Domain,
    arrays: Vec<Value>,
    quotient: BTreeSet<Ident>,
}

fn occurrences(t: &Term, x: &Ident) -> usize {
    match t {
        Term::Var(v) => usize::from(v == x),
        Term::Int(_) | Term::Float(_) => 0,
        Term::Index(a, i) => usize::from(a == x) + occurrences(i, x),
        Term::Neg(u) => occurrences(u, x),
        Term::Bin(_, l, r) => occurrences(l, x) + occurrences(r, x),
    }
}

fn is_var(t: &Term, x: &Ident) -> bool {
    matches!(t, Term::Var(v) if v == x)
}

/// Generators for `x` from the conjuncts, given the bound variables.
fn generators<'a>(conj: &[&'a Formula], x: &Ident, ty: Type, bound: &BTreeSet<Ident>) -> Vec<Gen<'a>> {
    let all_bound = |vs: BTreeSet<Ident>| vs.iter().all(|v| bound.contains(v));
    let mut g = Vec::new();
    for c in conj {
        let free: BTreeSet<Ident> = c.vars().into_iter().filter(|v| !bound.contains(v)).collect();
        match (c, ty) {
            (Formula::Alloc { array, lo, hi }, Type::Int) if bound.contains(array) => {
                if is_var(lo, x) && occurrences(hi, x) == 0 {
                    g.push(Gen::Alloc { array: array.clone(), other: hi, x_is_lo: true });
                } else if is_var(hi, x) && occurrences(lo, x) == 0 {
                    g.push(Gen::Alloc { array: array.clone(), other: lo, x_is_lo: false });
                }
                continue;
            }
            _ => {}
        }
        if free.len() != 1 || !free.contains(x) {
            continue;
        }
        match (c, ty) {
            (Formula::Cmp(Rel::Eq, Term::Var(l), Term::Var(r)), Type::IntArray) => {
                g.push(Gen::Copy(if l == x { r.clone() } else { l.clone() }))
            }
            (Formula::Perm(l, r), Type::IntArray) if l != r => {
                g.push(Gen::PermOf(if l == x { r.clone() } else { l.clone() }))
            }
            (Formula::Cmp(rel, l, r), Type::Int) => {
                let (ol, or) = (occurrences(l, x), occurrences(r, x));
                match (rel, ol, or) {
                    (Rel::Eq, 1, 0) => g.push(Gen::Solve { known: r, unknown: l }),
                    (Rel::Eq, 0, 1) => g.push(Gen::Solve { known: l, unknown: r }),
                    (_, 1, 0) => g.push(Gen::Bound { rel: *rel, known: r, unknown: l }),
                    (_, 0, 1) => g.push(Gen::Bound { rel: rel.flip(), known: l, unknown: r }),
                    _ => {}
                }
            }
            (Formula::Seg { array, lo, hi, rel, bound: b }, Type::Int)
                if is_var(b, x) && all_bound(lo.vars()) && all_bound(hi.vars()) =>
            {
                g.push(Gen::Seg { array: array.clone(), lo, hi, rel: *rel })
            }
            _ => {}
        }
    }
    // solving beats bounding, so try those first
    g.sort_by_key(|g| !matches!(g, Gen::Copy(_) | Gen::PermOf(_) | Gen::Solve { .. }));
    g
}

/// Narrow `[lo, hi]` by `x rel v`.
fn tighten(lo: &mut i64, hi: &mut i64, rel: Rel, v: i64) {
    match rel {
        Rel::Eq => {
            *lo = (*lo).max(v);
            *hi = (*hi).min(v);
        }
        Rel::Lt => *hi = (*hi).min(v.saturating_sub(1)),
        Rel::Le => *hi = (*hi).min(v),
        Rel::Gt => *lo = (*lo).max(v.saturating_add(1)),
        Rel::Ge => *lo = (*lo).max(v),
        Rel::Ne => {}
    }
}

fn int_value(t: &Term, s: &State) -> Option<i64> {
    match eval_term(t, s) {
        Ok(Value::Int(v)) => v.to_i64(),
        _ => None,
    }
}

impl<'a> StateSpace<'a> {
    pub fn new(f: &'a Formula, vars: Vec<(Ident, Type)>, domain: &'a Domain) -> StateSpace<'a> {
        let conj = f.conjuncts();
        let mut bound: BTreeSet<Ident> = BTreeSet::new();
        let mut order = Vec::new();
        let mut gens = Vec::new();
        let mut checks = Vec::new();
        let mut assigned = vec![false; conj.len()];
        let mut closed = Vec::new();
        for (k, c) in conj.iter().enumerate() {
            if c.vars().is_empty() {
                closed.push(*c);
                assigned[k] = true;
            }
        }
        let mut remaining = vars;
        while !remaining.is_empty() {
            let pick = remaining
                .iter()
                .position(|(x, ty)| !generators(&conj, x, *ty, &bound).is_empty())
                .unwrap_or(0);
            let (x, ty) = remaining.remove(pick);
            gens.push(generators(&conj, &x, ty, &bound));
            bound.insert(x.clone());
            order.push((x, ty));
            let mut here = Vec::new();
            for (k, c) in conj.iter().enumerate() {
                if !assigned[k] && c.vars().iter().all(|v| bound.contains(v)) {
                    assigned[k] = true;
                    here.push(*c);
                }
            }
            checks.push(here);
        }
        // conjuncts over variables outside `vars` are checked at the end and
        // fail as unbound
        let leftover = conj.iter().enumerate().filter(|(k, _)| !assigned[*k]).map(|(_, c)| *c);
        match checks.last_mut() {
            Some(last) => last.extend(leftover),
            None => closed.extend(leftover),
        }
        let arrays = if order.iter().any(|(_, t)| *t == Type::IntArray) {
            domain.arrays()
        } else {
            Vec::new()
        };
        StateSpace {
            vars: order,
            gens,
            checks,
            closed,
            domain,
            arrays,
            quotient: BTreeSet::new(),
        }
    }

    /// Let each array in `vars` that is generated as a rearrangement of
    /// another take only the sorted rearrangement. Sound when the variable
    /// occurs only under `perm` everywhere it is read, since `perm` sees
    /// nothing but the multiset.
    pub fn with_quotient(mut self, vars: BTreeSet<Ident>) -> StateSpace<'a> {
        self.quotient = vars;
        self
    }

    /// Variables in binding order.
    pub fn vars(&self) -> &[(Ident, Type)] {
        &self.vars
    }

    fn candidates(&self, k: usize, s: &State) -> Cow<'_, [Value]> {
        let (x, ty) = &self.vars[k];
        match ty {
            Type::IntArray => {
                for g in &self.gens[k] {
                    match g {
                        Gen::Copy(y) => {
                            return match s.get(y.as_str()) {
                                Some(Value::Array(a)) if self.domain.contains_array(a) => {
                                    Cow::Owned(vec![Value::Array(a.clone())])
                                }
                                _ => Cow::Owned(Vec::new()),
                            };
                        }
                        Gen::PermOf(y) => {
                            return match s.get(y.as_str()) {
                                Some(Value::Array(a)) if self.quotient.contains(x) => {
                                    let mut e = a.elems().to_vec();
                                    e.sort();
                                    Cow::Owned(vec![Value::array(IntArray::new(a.lo(), e))])
                                }
                                Some(Value::Array(a)) => Cow::Owned(permutations(a)),
                                _ => Cow::Owned(Vec::new()),
                            };
                        }
                        _ => {}
                    }
                }
                Cow::Borrowed(&self.arrays)
            }
            Type::Int | Type::Float => {
                let (mut lo, mut hi) = self.domain.range_of(x);
                for g in &self.gens[k] {
                    match g {
                        Gen::Solve { known, unknown } => {
                            let Ok(Value::Int(target)) = eval_term(known, s) else {
                                continue;
                            };
                            match solve(unknown, x, target, s) {
                                Solution::One(v) => {
                                    return Cow::Owned(match v.to_i64() {
                                        Some(v) if lo <= v && v <= hi => vec![Value::int(v)],
                                        _ => Vec::new(),
                                    });
                                }
                                Solution::None => return Cow::Owned(Vec::new()),
                                Solution::Unknown => {}
                            }
                        }
                        Gen::Bound { rel, known, unknown } => {
                            let Ok(Value::Int(target)) = eval_term(known, s) else {
                                continue;
                            };
                            if let Some((rel, v)) = isolate(unknown, x, *rel, target, s) {
                                if let Some(v) = v.to_i64() {
                                    tighten(&mut lo, &mut hi, rel, v);
                                }
                            }
                        }
                        Gen::Alloc { array, other, x_is_lo } => {
                            let Some(Value::Array(a)) = s.get(array.as_str()) else {
                                continue;
                            };
                            let o = int_value(other, s);
                            if *x_is_lo {
                                // a.lo <= x <= min(a.hi, hi) + 1
                                tighten(&mut lo, &mut hi, Rel::Ge, a.lo());
                                tighten(&mut lo, &mut hi, Rel::Le, a.hi() + 1);
                                if let Some(o) = o {
                                    tighten(&mut lo, &mut hi, Rel::Le, o.saturating_add(1));
                                }
                            } else {
                                // max(a.lo, lo) - 1 <= x <= a.hi
                                tighten(&mut lo, &mut hi, Rel::Ge, a.lo() - 1);
                                tighten(&mut lo, &mut hi, Rel::Le, a.hi());
                                if let Some(o) = o {
                                    tighten(&mut lo, &mut hi, Rel::Ge, o.saturating_sub(1));
                                }
                            }
                        }
                        Gen::Seg { array, lo: l, hi: h, rel } => {
                            let (Some(Value::Array(a)), Some(l), Some(h)) =
                                (s.get(array.as_str()), int_value(l, s), int_value(h, s))
                            else {
                                continue;
                            };
                            if l > h || l < a.lo() || h > a.hi() {
                                continue;
                            }
                            for k in l..=h {
                                if let Some(e) = a.get(&Int::from(k)).and_then(Int::to_i64) {
                                    // e rel x  <=>  x flip(rel) e
                                    tighten(&mut lo, &mut hi, rel.flip(), e);
                                }
                            }
                        }
                        _ => {}
                    }
                }
                if lo > hi {
                    return Cow::Owned(Vec::new());
                }
                Cow::Owned((lo..=hi).map(Value::int).collect())
            }
        }
    }

    /// Run every conjunct scheduled at level `k`. `Some(errors)` when none
    /// is false.
    fn test(&self, checks: &[&Formula], s: &State) -> Option<u32> {
        let mut errors = 0;
        for c in checks {
            match eval_formula(c, s) {
                Ok(true) => {}
                Ok(false) => return None,
                Err(_) => errors += 1,
            }
        }
        Some(errors)
    }

    /// Hand every satisfying state to `f`, exhaustively when the cap
    /// allows and by seeded sampling otherwise. `f` may stop early.
    pub fn for_each(&self, mut f: impl FnMut(&State) -> ControlFlow<()>) -> Enumeration {
        let mut stats = Enumeration {
            mode: Mode::Exhaustive,
            visited: 0,
            satisfying: 0,
            undefined: 0,
        };
        let Some(errors) = self.test(&self.closed, &State::new()) else {
            return stats;
        };
        let mut s = State::new();
        match self.descend(0, &mut s, errors, &mut stats, &mut f) {
            ControlFlow::Continue(()) | ControlFlow::Break(Stop::Done) => stats,
            ControlFlow::Break(Stop::Cap) => {
                stats.mode = Mode::Sampled;
                self.sample(errors, &mut stats, &mut f);
                stats
            }
        }
    }

    fn descend(
        &self,
        k: usize,
        s: &mut State,
        errors: u32,
        stats: &mut Enumeration,
        f: &mut impl FnMut(&State) -> ControlFlow<()>,
    ) -> ControlFlow<Stop> {
        if k == self.vars.len() {
            if stats.satisfying + stats.undefined >= self.domain.cap {
                return ControlFlow::Break(Stop::Cap);
            }
            if errors > 0 {
                stats.undefined += 1;
                return ControlFlow::Continue(());
            }
            stats.satisfying += 1;
            return match f(s) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(Stop::Done),
            };
        }
        let name = self.vars[k].0.clone();
        for v in self.candidates(k, s).iter() {
            stats.visited += 1;
            if stats.visited > self.domain.cap.saturating_mul(VISITS_PER_STATE) {
                return ControlFlow::Break(Stop::Cap);
            }
            s.set(name.clone(), v.clone());
            if let Some(e) = self.test(&self.checks[k], s) {
                self.descend(k + 1, s, errors + e, stats, f)?;
            }
        }
        s.unset(name.as_str());
        ControlFlow::Continue(())
    }

    /// Seeded random descent: pick a candidate uniformly at each level and
    /// restart whenever a conjunct fails.
    fn sample(&self, errors0: u32, stats: &mut Enumeration, f: &mut impl FnMut(&State) -> ControlFlow<()>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.domain.seed);
        let budget = self.domain.samples.saturating_mul(100);
        let mut drawn = 0;
        let mut attempts = 0;
        'draw: while drawn < self.domain.samples && attempts < budget {
            attempts += 1;
            let mut s = State::new();
            let mut errors = errors0;
            for k in 0..self.vars.len() {
                let cands = self.candidates(k, &s);
                if cands.is_empty() {
                    continue 'draw;
                }
                stats.visited += 1;
                let v = cands[rng.gen_range(0..cands.len())].clone();
                s.set(self.vars[k].0.clone(), v);
                match self.test(&self.checks[k], &s) {
                    Some(e) => errors += e,
                    None => continue 'draw,
                }
            }
            if errors > 0 {
                stats.undefined += 1;
                continue;
            }
            drawn += 1;
            stats.satisfying += 1;
            if f(&s).is_break() {
                return;
            }
        }
    }
}

/// Distinct rearrangements of `a`, in lexicographic order.
fn permutations(a: &IntArray) -> Vec<Value> {
    let mut cur: Vec<Int> = a.elems().to_vec();
    cur.sort();
    let mut out = Vec::new();
    loop {
        out.push(Value::array(IntArray::new(a.lo(), cur.clone())));
        // next lexicographic permutation
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Rewrite `t rel target` as `x rel' v` when `t` is `x` shifted or
/// negated by known terms.
fn isolate(t: &Term, x: &Ident, rel: Rel, target: Int, s: &State) -> Option<(Rel, Int)> {
    let value = |u: &Term| match eval_term(u, s) {
        Ok(Value::Int(v)) => Some(v),
        _ => None,
    };
    match t {
        Term::Var(v) if v == x => Some((rel, target)),
        Term::Neg(u) => isolate(u, x, rel.flip(), target.neg(), s),
        Term::Bin(op, l, r) => {
            let x_left = occurrences(l, x) == 1;
            let (inner, other) = if x_left { (l, r) } else { (r, l) };
            let k = value(other)?;
            match op {
                BinOp::Add => isolate(inner, x, rel, target.sub(&k), s),
                BinOp::Sub if x_left => isolate(inner, x, rel, target.add(&k), s),
                // k - inner rel target  <=>  inner flip(rel) k - target
                BinOp::Sub => isolate(inner, x, rel.flip(), k.sub(&target), s),
                _ => None,
            }
        }
        _ => None,
    }
}

enum Solution {
    One(Int),
    None,
    /// Not invertible here; fall back to enumeration.
    Unknown,
}

/// Solve `t = target` for `x`, which occurs exactly once in `t`.
fn solve(t: &Term, x: &Ident, target: Int, s: &State) -> Solution {
    let value = |u: &Term| match eval_term(u, s) {
        Ok(Value::Int(v)) => Some(v),
        _ => None,
    };
    match t {
        Term::Var(v) if v == x => Solution::One(target),
        Term::Neg(u) => solve(u, x, target.neg(), s),
        Term::Bin(op, l, r) => {
            let x_left = occurrences(l, x) == 1;
            let (inner, other) = if x_left { (l, r) } else { (r, l) };
            let Some(k) = value(other) else {
                return Solution::Unknown;
            };
            match op {
                BinOp::Add => solve(inner, x, target.sub(&k), s),
                BinOp::Sub if x_left => solve(inner, x, target.add(&k), s),
                BinOp::Sub => solve(inner, x, k.sub(&target), s),
                BinOp::Mul if k.is_zero() => Solution::Unknown,
                BinOp::Mul => match target.rem(&k) {
                    Some(r) if r.is_zero() => solve(inner, x, target.div(&k).expect("nonzero"), s),
                    _ => Solution::None,
                },
                _ => Solution::Unknown,
            }
        }
        _ => Solution::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn collect(f: &Formula, vars: &[(&str, Type)], d: &Domain) -> (Vec<State>, Enumeration) {
        let vars = vars.iter().map(|(n, t)| (Ident::new(n), *t)).collect();
        let space = StateSpace::new(f, vars, d);
        let mut out = Vec::new();
        let e = space.for_each(|s| {
            out.push(s.clone());
            ControlFlow::Continue(())
        });
        (out, e)
    }

    /// Brute force over the raw product, as an oracle for the pruned walk.
    fn brute(f: &Formula, vars: &[(&str, Type)], d: &Domain) -> BTreeSet<String> {
        let mut states = vec![State::new()];
        for (n, t) in vars {
            let vals: Vec<Value> = match t {
                Type::IntArray => d.arrays(),
                _ => {
                    let (lo, hi) = d.range_of(&Ident::new(n));
                    (lo..=hi).map(Value::int).collect()
                }
            };
            states = states
                .into_iter()
                .flat_map(|s| vals.iter().map(move |v| s.clone().with(n, v.clone())))
                .collect();
        }
        states
            .into_iter()
            .filter(|s| eval_formula(f, s) == Ok(true))
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn array_order_is_length_then_lexicographic() {
        let d = Domain {
            array_len: (0, 2),
            elem_range: (0, 1),
            ..Domain::default()
        };
        let a: Vec<String> = d.arrays().iter().map(|v| v.to_string()).collect();
        assert_eq!(a, ["[]", "[0]", "[1]", "[0,0]", "[0,1]", "[1,0]", "[1,1]"]);
    }

    #[test]
    fn permutations_are_distinct() {
        let p = permutations(&IntArray::zero_based([1, 0, 1]));
        let s: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        assert_eq!(s, ["[0,1,1]", "[1,0,1]", "[1,1,0]"]);
    }

    #[test]
    fn pruned_walk_matches_brute_force() {
        let d = Domain {
            int_range: (-3, 4),
            array_len: (0, 3),
            ..Domain::default()
        };
        let cases: Vec<(&str, Vec<(&str, Type)>)> = vec![
            ("n = n0 & a = a0 & n0 > 0", vec![("n", Type::Int), ("a", Type::Int), ("n0", Type::Int), ("a0", Type::Int)]),
            ("n0 * a0 = z + n * a & n > 0", vec![("n", Type::Int), ("a", Type::Int), ("n0", Type::Int), ("a0", Type::Int), ("z", Type::Int)]),
            ("3 - x = y & x != 1", vec![("y", Type::Int), ("x", Type::Int)]),
            (
                "perm(a, a0) & m <= f <= t <= n + 1 & alloc(a, m, n) & a[m..f-1] < 1",
                vec![("a", Type::IntArray), ("a0", Type::IntArray), ("m", Type::Int), ("n", Type::Int), ("f", Type::Int), ("t", Type::Int)],
            ),
            ("a = a0 & m < n", vec![("a", Type::IntArray), ("m", Type::Int), ("a0", Type::IntArray), ("n", Type::Int)]),
        ];
        for (src, vars) in cases {
            let f = parse_formula(src).unwrap();
            let (got, e) = collect(&f, &vars, &d);
            assert_eq!(e.mode, Mode::Exhaustive);
            let got: BTreeSet<String> = got.iter().map(|s| s.to_string()).collect();
            assert_eq!(got, brute(&f, &vars, &d), "{src}");
        }
    }

    #[test]
    fn falls_back_to_sampling_past_the_cap() {
        let d = Domain {
            int_range: (0, 99),
            cap: 1000,
            samples: 50,
            ..Domain::default()
        };
        let f = parse_formula("x + y > 10").unwrap();
        let (got, e) = collect(&f, &[("x", Type::Int), ("y", Type::Int)], &d);
        assert_eq!(e.mode, Mode::Sampled);
        assert!(got.len() >= 50);
        assert!(got.iter().all(|s| eval_formula(&f, s) == Ok(true)));
    }
}
