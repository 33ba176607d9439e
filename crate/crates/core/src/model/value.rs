use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::ast::Type;
use super::int::Int;

/// An integer array with logical bounds `lo..=hi`.
///
/// The backing storage is zero-based; `lo` only shifts the index space. An
/// empty array has `hi = lo - 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntArray {
    lo: i64,
    elems: Vec<Int>,
}

impl IntArray {
    pub fn new(lo: i64, elems: Vec<Int>) -> Self {
        IntArray { lo, elems }
    }

    pub fn zero_based<I: IntoIterator<Item = i64>>(elems: I) -> Self {
        IntArray {
            lo: 0,
            elems: elems.into_iter().map(Int::from).collect(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.elems.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Int] {
        &self.elems
    }

    fn offset(&self, index: &Int) -> Option<usize> {
        let i = index.to_i64()?;
        if i < self.lo || i > self.hi() {
            return None;
        }
        Some((i - self.lo) as usize)
    }

    /// Element at logical index, `None` when out of bounds.
    pub fn get(&self, index: &Int) -> Option<&Int> {
        self.offset(index).map(|o| &self.elems[o])
    }

    /// Overwrite the element at a logical index; `false` when out of bounds.
    pub fn set(&mut self, index: &Int, v: Int) -> bool {
        match self.offset(index) {
            Some(o) => {
                self.elems[o] = v;
                true
            }
            None => false,
        }
    }

    pub fn swap(&mut self, i: &Int, j: &Int) -> bool {
        match (self.offset(i), self.offset(j)) {
            (Some(a), Some(b)) => {
                self.elems.swap(a, b);
                true
            }
            _ => false,
        }
    }

    /// Multiset equality of contents.
    pub fn is_permutation_of(&self, other: &IntArray) -> bool {
        if self.elems.len() != other.elems.len() {
            return false;
        }
        let mut a = self.elems.clone();
        let mut b = other.elems.clone();
        a.sort();
        b.sort();
        a == b
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.elems.iter().map(Int::to_i64).collect()
    }
}

impl fmt::Debug for IntArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.elems.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")?;
        if self.lo != 0 {
            write!(f, "@{}", self.lo)?;
        }
        Ok(())
    }
}

/// A runtime value. Arrays are shared copy-on-write.
#[derive(Clone)]
pub enum Value {
    Int(Int),
    Float(f64),
    Array(Arc<IntArray>),
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Int(Int::from(v))
    }

    pub fn array(a: IntArray) -> Value {
        Value::Array(Arc::new(a))
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Float(_) => "float",
            Value::Array(_) => "int[]",
        }
    }

    pub fn as_int(&self) -> Option<&Int> {
        match self {
            Value::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&IntArray> {
        match self {
            Value::Array(a) => Some(a),
            _ => None,
        }
    }

    /// Numeric comparison with int-to-float promotion. `None` for arrays or NaN.
    pub fn num_cmp(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
            (Value::Int(a), Value::Float(b)) => a.to_f64().partial_cmp(b),
            (Value::Float(a), Value::Int(b)) => a.partial_cmp(&b.to_f64()),
            (Value::Float(a), Value::Float(b)) => a.partial_cmp(b),
            _ => None,
        }
    }

    /// Equality as used by `=` in formulas: numeric with promotion, or
    /// structural for two arrays.
    pub fn semantic_eq(&self, other: &Value) -> Option<bool> {
        match (self, other) {
            (Value::Array(a), Value::Array(b)) => Some(a == b),
            (Value::Array(_), _) | (_, Value::Array(_)) => None,
            _ => self.num_cmp(other).map(|o| o == Ordering::Equal),
        }
    }
}

impl Value {
    /// Read a value of type `ty` from command-line text: `8`, `5.0`,
    /// `[2,0,1]`, or `[2,0,1]@3` for an array starting at index 3. An
    /// integer literal is accepted for a float.
    pub fn parse(text: &str, ty: Type) -> Result<Value, String> {
        let text = text.trim();
        match ty {
            Type::Int => text.parse::<Int>().map(Value::Int).map_err(|_| format!("`{text}` is not an integer")),
            Type::Float => text
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Value::Float)
                .ok_or_else(|| format!("`{text}` is not a finite number")),
            Type::IntArray => {
                let (body, lo) = match text.rsplit_once('@') {
                    Some((b, lo)) => (b, lo.trim().parse::<i64>().map_err(|_| format!("bad lower bound in `{text}`"))?),
                    None => (text, 0),
                };
                let inner = body
                    .trim()
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| format!("`{text}` is not an array like [1,2,3]"))?;
                let elems = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|e| !e.is_empty())
                    .map(|e| e.parse::<Int>().map_err(|_| format!("`{e}` is not an integer")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Value::array(IntArray::new(lo, elems)))
            }
        }
    }

    /// Read a value of type `ty` from JSON: a number (or a decimal string for
    /// big integers), and for arrays either a list or `{"lo", "elems"}`.
    pub fn from_json(v: &serde_json::Value, ty: Type) -> Result<Value, String> {
        use serde_json::Value as J;
        match (ty, v) {
            (Type::Int, J::Number(n)) => n
                .as_i64()
                .map(Value::int)
                .ok_or_else(|| format!("{n} is not an integer")),
            (Type::Int, J::String(s)) => Value::parse(s, Type::Int),
            (Type::Float, J::Number(n)) => n.as_f64().map(Value::Float).ok_or_else(|| format!("{n} is not a number")),
            (Type::IntArray, J::Array(xs)) => {
                let elems = xs
                    .iter()
                    .map(|x| match Value::from_json(x, Type::Int)? {
                        Value::Int(i) => Ok(i),
                        _ => unreachable!("int requested"),
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                Ok(Value::array(IntArray::new(0, elems)))
            }
            (Type::IntArray, J::Object(o)) => {
                let lo = o.get("lo").and_then(J::as_i64).unwrap_or(0);
                let elems = o.get("elems").ok_or("array object without `elems`")?;
                match Value::from_json(elems, Type::IntArray)? {
                    Value::Array(a) => Ok(Value::array(IntArray::new(lo, a.elems().to_vec()))),
                    _ => unreachable!("array requested"),
                }
            }
            (ty, other) => Err(format!("expected {ty}, got {other}")),
        }
    }
}

// Structural identity (used for state sets); floats compare by bit pattern.
impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Float(a), Value::Float(b)) => a.to_bits() == b.to_bits(),
            (Value::Array(a), Value::Array(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Value::Int(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Value::Float(x) => {
                1u8.hash(state);
                x.to_bits().hash(state);
            }
            Value::Array(a) => {
                2u8.hash(state);
                a.hash(state);
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => {
                if x.fract() == 0.0 && x.is_finite() {
                    write!(f, "{x:.1}")
                } else {
                    write!(f, "{x}")
                }
            }
            Value::Array(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON form: ints as numbers when they fit (strings otherwise), floats as
/// numbers, arrays as `{"lo": .., "elems": [..]}`.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(Int::Small(v)) => s.serialize_i64(*v),
            Value::Int(big) => s.serialize_str(&big.to_string()),
            Value::Float(x) => s.serialize_f64(*x),
            Value::Array(a) => {
                let mut st = s.serialize_struct("IntArray", 2)?;
                st.serialize_field("lo", &a.lo())?;
                let elems: Vec<Value> = a.elems().iter().cloned().map(Value::Int).collect();
                st.serialize_field("elems", &elems)?;
                st.end()
            }
        }
    }
}
