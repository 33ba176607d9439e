use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::ast::Ident;
use super::value::Value;

/// A program state: variable bindings plus the print stream.
///
/// Bindings are kept sorted by name so that equal states hash equally
/// regardless of assignment order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct State {
    bindings: Vec<(Ident, Value)>,
    out: Vec<Value>,
}

impl State {
    pub fn new() -> State {
        State::default()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings
            .binary_search_by(|(k, _)| k.as_str().cmp(name))
            .ok()
            .map(|i| &self.bindings[i].1)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Value> {
        match self.bindings.binary_search_by(|(k, _)| k.as_str().cmp(name)) {
            Ok(i) => Some(&mut self.bindings[i].1),
            Err(_) => None,
        }
    }

    pub fn set(&mut self, name: Ident, v: Value) {
        match self
            .bindings
            .binary_search_by(|(k, _)| k.as_str().cmp(name.as_str()))
        {
            Ok(i) => self.bindings[i].1 = v,
            Err(i) => self.bindings.insert(i, (name, v)),
        }
    }

    pub fn unset(&mut self, name: &str) {
        if let Ok(i) = self.bindings.binary_search_by(|(k, _)| k.as_str().cmp(name)) {
            self.bindings.remove(i);
        }
    }

    pub fn with(mut self, name: &str, v: Value) -> State {
        self.set(Ident::new(name), v);
        self
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Ident, &Value)> {
        self.bindings.iter().map(|(k, v)| (k, v))
    }

    pub fn out(&self) -> &[Value] {
        &self.out
    }

    pub fn push_out(&mut self, v: Value) {
        self.out.push(v);
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, v)) in self.bindings.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={v}")?;
        }
        if !self.out.is_empty() {
            if !self.bindings.is_empty() {
                f.write_str(",")?;
            }
            f.write_str("out=[")?;
            for (k, v) in self.out.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

struct Bindings<'a>(&'a [(Ident, Value)]);

impl Serialize for Bindings<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k.as_str(), v)?;
        }
        m.end()
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("State", 2)?;
        st.serialize_field("vars", &Bindings(&self.bindings))?;
        st.serialize_field("out", &self.out)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insertion_order_does_not_matter() {
        let a = State::new().with("n", Value::int(1)).with("a", Value::int(2));
        let b = State::new().with("a", Value::int(2)).with("n", Value::int(1));
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "a=2,n=1");
    }

    #[test]
    fn set_overwrites() {
        let mut s = State::new().with("n", Value::int(1));
        s.set(Ident::new("n"), Value::int(5));
        assert_eq!(s.get("n"), Some(&Value::int(5)));
        assert!(s.get("m").is_none());
        s.unset("n");
        assert!(s.get("n").is_none());
    }
}
