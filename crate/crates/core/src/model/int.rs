//! Arbitrary-precision integers with an inline fast path.
//!
//! Almost every value in a bounded verification run fits in an `i64`, so the
//! small representation is tried first and only checked overflow promotes to
//! a heap-allocated `BigInt`. Values are always normalized: a `Big` never
//! holds something that fits in `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Int::Small(v) => *v as f64,
            Int::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_even(&self) -> bool {
        match self {
            Int::Small(v) => v % 2 == 0,
            Int::Big(b) => (&**b % 2u8).is_zero(),
        }
    }

    pub fn add(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big() + rhs.to_big())
    }

    pub fn sub(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big() - rhs.to_big())
    }

    pub fn mul(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_mul(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big() * rhs.to_big())
    }

    /// Division truncating toward zero. `None` on a zero divisor.
    pub fn div(&self, rhs: &Int) -> Option<Int> {
        if rhs.is_zero() {
            return None;
        }
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_div(*b) {
                return Some(Int::Small(v));
            }
        }
        // BigInt division also truncates toward zero.
        Some(Int::from_big(self.to_big() / rhs.to_big()))
    }

    /// Remainder with the sign of the dividend (pairs with [`Int::div`]).
    pub fn rem(&self, rhs: &Int) -> Option<Int> {
        if rhs.is_zero() {
            return None;
        }
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_rem(*b) {
                return Some(Int::Small(v));
            }
        }
        Some(Int::from_big(self.to_big() % rhs.to_big()))
    }

    /// `self` raised to a non-negative power.
    pub fn pow(&self, exp: u32) -> Int {
        if let Int::Small(b) = self {
            if let Some(v) = b.checked_pow(exp) {
                return Int::Small(v);
            }
        }
        Int::from_big(num_traits::Pow::pow(self.to_big(), exp))
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int::from_big(v)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Big(a), Int::Big(b)) => a == b,
            // normalized: a Big never equals a Small
            _ => false,
        }
    }
}

impl Eq for Int {}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Int {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => {
                0u8.hash(state);
                v.hash(state);
            }
            Int::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<i64>() {
            Ok(v) => Ok(Int::Small(v)),
            Err(_) => s.parse::<BigInt>().map(Int::from_big),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let max = Int::from(i64::MAX);
        let big = max.add(&Int::ONE);
        assert!(matches!(big, Int::Big(_)));
        assert_eq!(big.sub(&Int::ONE), max);
        assert!(matches!(big.sub(&Int::ONE), Int::Small(_)));
        assert_eq!(Int::from(i64::MIN).neg().to_string(), "9223372036854775808");
        assert_eq!(Int::from(2).pow(64).to_string(), "18446744073709551616");
        assert_eq!(Int::from(-3).pow(3), Int::from(-27));
        assert_eq!(Int::from(7).pow(0), Int::ONE);
    }

    #[test]
    fn division_truncates_toward_zero() {
        let d = |a: i64, b: i64| Int::from(a).div(&Int::from(b)).unwrap();
        let r = |a: i64, b: i64| Int::from(a).rem(&Int::from(b)).unwrap();
        assert_eq!(d(7, 2), Int::from(3));
        assert_eq!(d(-7, 2), Int::from(-3));
        assert_eq!(r(-7, 2), Int::from(-1));
        assert!(Int::from(1).div(&Int::ZERO).is_none());
        assert_eq!(Int::from(i64::MIN).div(&Int::from(-1)).unwrap().to_string(), "9223372036854775808");
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigint(a in any::<i64>(), b in any::<i64>()) {
            let (x, y) = (Int::from(a), Int::from(b));
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            prop_assert_eq!(x.add(&y), Int::from(&ba + &bb));
            prop_assert_eq!(x.sub(&y), Int::from(&ba - &bb));
            prop_assert_eq!(x.mul(&y), Int::from(&ba * &bb));
            prop_assert_eq!(x.cmp(&y), ba.cmp(&bb));
            if b != 0 {
                prop_assert_eq!(x.div(&y).unwrap(), Int::from(&ba / &bb));
                prop_assert_eq!(x.rem(&y).unwrap(), Int::from(&ba % &bb));
            }
        }
    }
}
