use serde::Serialize;
use thiserror::Error;

use crate::model::{BinOp, Formula, Ident, Int, Rel, State, Term, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("variable {0} is unbound")]
    Unbound(Ident),
    #[error("index {index} out of bounds for {array} ({lo}..{hi})")]
    OutOfBounds {
        array: Ident,
        index: String,
        lo: i64,
        hi: i64,
    },
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("negative exponent in `{0}`")]
    NegativeExponent(String),
    #[error("exponent too large in `{0}`")]
    ExponentTooLarge(String),
    #[error("label reference {0} must be expanded before evaluation")]
    UnexpandedLabel(Ident),
    #[error("empty choice range {lo}..{hi} for {var}")]
    EmptyChoice { var: Ident, lo: String, hi: String },
}

/// Operation counts accumulated while evaluating guards and bodies.
/// Assertion checks are not counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub additions: u64,
    pub subtractions: u64,
    pub multiplications: u64,
    pub divisions: u64,
    pub comparisons: u64,
    pub swaps: u64,
}

impl Counters {
    pub fn entries(&self) -> [(&'static str, u64); 6] {
        [
            ("additions", self.additions),
            ("subtractions", self.subtractions),
            ("multiplications", self.multiplications),
            ("divisions", self.divisions),
            ("comparisons", self.comparisons),
            ("swaps", self.swaps),
        ]
    }
}

/// Value of `t` in state `s`.
pub fn eval_term(t: &Term, s: &State) -> Result<Value, EvalError> {
    term(t, s, &mut Counters::default())
}

/// Truth of `f` in state `s`. Label references must already be expanded.
pub fn eval_formula(f: &Formula, s: &State) -> Result<bool, EvalError> {
    formula(f, s, &mut Counters::default())
}

pub(crate) fn lookup<'a>(s: &'a State, x: &Ident) -> Result<&'a Value, EvalError> {
    s.get(x.as_str()).ok_or_else(|| EvalError::Unbound(x.clone()))
}

pub(crate) fn int_of(v: Value, what: &dyn Fn() -> String) -> Result<Int, EvalError> {
    match v {
        Value::Int(i) => Ok(i),
        other => Err(EvalError::Type(format!(
            "{} is {}, expected int",
            what(),
            other.type_name()
        ))),
    }
}

pub(crate) fn out_of_bounds(array: &Ident, a: &crate::model::IntArray, index: &Int) -> EvalError {
    EvalError::OutOfBounds {
        array: array.clone(),
        index: index.to_string(),
        lo: a.lo(),
        hi: a.hi(),
    }
}

pub(crate) fn term(t: &Term, s: &State, c: &mut Counters) -> Result<Value, EvalError> {
    Ok(match t {
        Term::Int(i) => Value::Int(i.clone()),
        Term::Float(x) => Value::Float(x.0),
        Term::Var(x) => lookup(s, x)?.clone(),
        Term::Index(a, i) => {
            let idx = int_of(term(i, s, c)?, &|| format!("index `{i}`"))?;
            let arr = lookup(s, a)?
                .as_array()
                .ok_or_else(|| EvalError::Type(format!("{a} is not an array")))?;
            Value::Int(arr.get(&idx).ok_or_else(|| out_of_bounds(a, arr, &idx))?.clone())
        }
        Term::Neg(u) => match term(u, s, c)? {
            Value::Int(i) => Value::Int(i.neg()),
            Value::Float(x) => Value::Float(-x),
            Value::Array(_) => return Err(EvalError::Type(format!("cannot negate array `{u}`"))),
        },
        Term::Bin(op, l, r) => {
            let lv = term(l, s, c)?;
            let rv = term(r, s, c)?;
            binary(*op, lv, rv, t, c)?
        }
    })
}

fn binary(op: BinOp, l: Value, r: Value, t: &Term, c: &mut Counters) -> Result<Value, EvalError> {
    match op {
        BinOp::Add => c.additions += 1,
        BinOp::Sub => c.subtractions += 1,
        BinOp::Mul | BinOp::Pow => c.multiplications += 1,
        BinOp::Div | BinOp::Mod => c.divisions += 1,
    }
    match (l, r) {
        (Value::Int(a), Value::Int(b)) => Ok(Value::Int(match op {
            BinOp::Add => a.add(&b),
            BinOp::Sub => a.sub(&b),
            BinOp::Mul => a.mul(&b),
            BinOp::Div => a.div(&b).ok_or_else(|| EvalError::DivisionByZero(t.to_string()))?,
            BinOp::Mod => a.rem(&b).ok_or_else(|| EvalError::DivisionByZero(t.to_string()))?,
            BinOp::Pow => {
                if b < Int::ZERO {
                    return Err(EvalError::NegativeExponent(t.to_string()));
                }
                let e = b
                    .to_i64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| EvalError::ExponentTooLarge(t.to_string()))?;
                a.pow(e)
            }
        })),
        (Value::Array(_), _) | (_, Value::Array(_)) => Err(EvalError::Type(format!(
            "arithmetic on an array in `{t}`"
        ))),
        (l, r) => {
            let x = as_f64(&l);
            let y = as_f64(&r);
            Ok(Value::Float(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div | BinOp::Mod if y == 0.0 => {
                    return Err(EvalError::DivisionByZero(t.to_string()))
                }
                BinOp::Div => x / y,
                BinOp::Mod => x % y,
                BinOp::Pow => match r {
                    Value::Int(e) => match e.to_i64().and_then(|e| i32::try_from(e).ok()) {
                        Some(e) => x.powi(e),
                        None => return Err(EvalError::ExponentTooLarge(t.to_string())),
                    },
                    _ => x.powf(y),
                },
            }))
        }
    }
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Int(i) => i.to_f64(),
        Value::Float(x) => *x,
        Value::Array(_) => f64::NAN,
    }
}

fn compare(rel: Rel, l: &Value, r: &Value, f: &Formula) -> Result<bool, EvalError> {
    if let (Value::Array(_), _) | (_, Value::Array(_)) = (l, r) {
        let eq = l
            .semantic_eq(r)
            .ok_or_else(|| EvalError::Type(format!("array compared with a number in `{f}`")))?;
        return match rel {
            Rel::Eq => Ok(eq),
            Rel::Ne => Ok(!eq),
            _ => Err(EvalError::Type(format!("arrays are only compared with = or != in `{f}`"))),
        };
    }
    Ok(match l.num_cmp(r) {
        Some(ord) => rel.holds(ord),
        // NaN: only `!=` holds
        None => rel == Rel::Ne,
    })
}

fn array_arg<'a>(s: &'a State, a: &Ident) -> Result<&'a crate::model::IntArray, EvalError> {
    lookup(s, a)?
        .as_array()
        .ok_or_else(|| EvalError::Type(format!("{a} is not an array")))
}

/// A conjunction is false as soon as one conjunct is false, even when
/// another conjunct cannot be evaluated (a failed bounds check guards the
/// rest). Dually for disjunction.
pub(crate) fn formula(f: &Formula, s: &State, c: &mut Counters) -> Result<bool, EvalError> {
    match f {
        Formula::Bool(b) => Ok(*b),
        Formula::Cmp(rel, l, r) => {
            let lv = term(l, s, c)?;
            let rv = term(r, s, c)?;
            c.comparisons += 1;
            compare(*rel, &lv, &rv, f)
        }
        Formula::Even(t) | Formula::Odd(t) => {
            let v = int_of(term(t, s, c)?, &|| format!("`{t}`"))?;
            Ok(v.is_even() == matches!(f, Formula::Even(_)))
        }
        Formula::Perm(a, b) => Ok(array_arg(s, a)?.is_permutation_of(array_arg(s, b)?)),
        Formula::Seg {
            array,
            lo,
            hi,
            rel,
            bound,
        } => {
            let lo = int_of(term(lo, s, c)?, &|| format!("segment bound `{lo}`"))?;
            let hi = int_of(term(hi, s, c)?, &|| format!("segment bound `{hi}`"))?;
            let b = term(bound, s, c)?;
            let arr = array_arg(s, array)?;
            let mut k = lo;
            while k <= hi {
                let e = arr.get(&k).ok_or_else(|| out_of_bounds(array, arr, &k))?;
                if !compare(*rel, &Value::Int(e.clone()), &b, f)? {
                    return Ok(false);
                }
                k = k.add(&Int::ONE);
            }
            Ok(true)
        }
        Formula::Alloc { array, lo, hi } => {
            let lo = int_of(term(lo, s, c)?, &|| format!("`{lo}`"))?;
            let hi = int_of(term(hi, s, c)?, &|| format!("`{hi}`"))?;
            let arr = array_arg(s, array)?;
            Ok(Int::from(arr.lo()) <= lo && lo <= hi.add(&Int::ONE) && hi <= Int::from(arr.hi()))
        }
        Formula::Printed(t) => {
            let v = term(t, s, c)?;
            Ok(s.out().iter().any(|o| o.semantic_eq(&v) == Some(true)))
        }
        Formula::Not(g) => Ok(!formula(g, s, c)?),
        Formula::And(fs) => junction(fs, s, c, false),
        Formula::Or(fs) => junction(fs, s, c, true),
        Formula::Label(l) => Err(EvalError::UnexpandedLabel(l.clone())),
    }
}

/// `And` (decisive = false) or `Or` (decisive = true).
fn junction(fs: &[Formula], s: &State, c: &mut Counters, decisive: bool) -> Result<bool, EvalError> {
    let mut first_err = None;
    for g in fs {
        match formula(g, s, c) {
            Ok(v) if v == decisive => return Ok(decisive),
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(!decisive),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IntArray;
    use crate::parser::{parse_formula, parse_term};

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    fn arr(xs: &[i64]) -> Value {
        Value::array(IntArray::zero_based(xs.iter().copied()))
    }

    #[test]
    fn integer_division_truncates() {
        let s = State::new().with("n", Value::int(8));
        assert_eq!(eval_term(&t("n / 2"), &s).unwrap(), Value::int(4));
        let s = State::new().with("n", Value::int(7));
        assert_eq!(eval_term(&t("(n - 1) / 2"), &s).unwrap(), Value::int(3));
    }

    #[test]
    fn array_read() {
        let s = State::new().with("a", arr(&[2, 0, 1])).with("s", Value::int(1));
        assert_eq!(eval_term(&t("a[s]"), &s).unwrap(), Value::int(0));
        let s = s.with("s", Value::int(3));
        assert!(matches!(eval_term(&t("a[s]"), &s), Err(EvalError::OutOfBounds { .. })));
    }

    #[test]
    fn errors() {
        let s = State::new().with("n", Value::int(0));
        assert!(matches!(eval_term(&t("m"), &s), Err(EvalError::Unbound(_))));
        assert!(matches!(eval_term(&t("1 / n"), &s), Err(EvalError::DivisionByZero(_))));
        assert!(matches!(eval_term(&t("2 ^ (n - 1)"), &s), Err(EvalError::NegativeExponent(_))));
    }

    #[test]
    fn mixed_arithmetic_promotes() {
        let s = State::new().with("a", Value::Float(2.5)).with("n", Value::int(3));
        assert_eq!(eval_term(&t("n * a"), &s).unwrap(), Value::Float(7.5));
        assert_eq!(eval_term(&t("a ^ n"), &s).unwrap(), Value::Float(15.625));
        assert_eq!(eval_term(&t("n ^ 3"), &s).unwrap(), Value::int(27));
    }

    #[test]
    fn schemas() {
        let s = State::new()
            .with("a", arr(&[0, 1, 2]))
            .with("a0", arr(&[2, 0, 1]))
            .with("m", Value::int(0))
            .with("f", Value::int(1))
            .with("X", Value::int(1))
            .with("n", Value::int(4));
        assert!(eval_formula(&f("even(n)"), &s).unwrap());
        assert!(eval_formula(&f("perm(a, a0)"), &s).unwrap());
        assert!(eval_formula(&f("seg(a, m, f - 1, <, X)"), &s).unwrap());
        assert!(!eval_formula(&f("seg(a, m, f, <, X)"), &s).unwrap());
        assert!(eval_formula(&f("alloc(a, m, 2)"), &s).unwrap());
        assert!(!eval_formula(&f("alloc(a, m, 3)"), &s).unwrap());
        assert!(eval_formula(&f("alloc(a, 3, 2)"), &s).unwrap());
        assert!(!eval_formula(&f("alloc(a, 2, 0)"), &s).unwrap());
        assert!(eval_formula(&f("a != a0"), &s).unwrap());
    }

    #[test]
    fn false_conjunct_shields_errors() {
        let s = State::new().with("a", arr(&[1])).with("i", Value::int(5));
        assert!(!eval_formula(&f("i < 1 & a[i] = 0"), &s).unwrap());
        assert!(!eval_formula(&f("a[i] = 0 & i < 1"), &s).unwrap());
        assert!(eval_formula(&f("a[i] = 0 or i > 1"), &s).unwrap());
        assert!(eval_formula(&f("a[i] = 0 & i > 1"), &s).is_err());
    }

    #[test]
    fn printed_compares_numerically() {
        let mut s = State::new().with("n0", Value::int(8)).with("a0", Value::Float(5.0));
        assert!(!eval_formula(&f("printed(n0 * a0)"), &s).unwrap());
        s.push_out(Value::Float(40.0));
        assert!(eval_formula(&f("printed(n0 * a0)"), &s).unwrap());
    }

    #[test]
    fn counts_additions_only_for_plus() {
        let s = State::new().with("n", Value::int(7)).with("a", Value::int(3));
        let mut c = Counters::default();
        term(&t("(n - 1) / 2 + a + a * a"), &s, &mut c).unwrap();
        assert_eq!((c.additions, c.subtractions, c.multiplications, c.divisions), (2, 1, 1, 1));
    }
}
