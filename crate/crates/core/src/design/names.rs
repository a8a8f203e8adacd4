use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::DesignError;

/// An action name of the signature.
///
/// Derived names produced by the linear-logic translation have the textual
/// forms `pi1[a]`, `pi2[a]` and `wp[a,b]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn star() -> Name {
        Name::new("*")
    }

    pub fn up() -> Name {
        Name::new("up")
    }

    pub fn pi1(a: &Name) -> Name {
        Name::new(&format!("pi1[{}]", a))
    }

    pub fn pi2(a: &Name) -> Name {
        Name::new(&format!("pi2[{}]", a))
    }

    pub fn wp(a: &Name, b: &Name) -> Name {
        Name::new(&format!("wp[{},{}]", a, b))
    }

    /// Splits a derived name into its constructor and components.
    fn derived(&self) -> Option<(&str, Vec<Name>)> {
        let s = self.as_str();
        let open = s.find('[')?;
        if !s.ends_with(']') {
            return None;
        }
        let head = &s[..open];
        let inner = &s[open + 1..s.len() - 1];
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (i, c) in inner.char_indices() {
            match c {
                '[' => depth += 1,
                ']' => depth = depth.checked_sub(1)?,
                ',' if depth == 0 => {
                    parts.push(Name::new(&inner[start..i]));
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(Name::new(&inner[start..]));
        Some((head, parts))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable. Names starting with `_` are reserved for generated variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(s: &str) -> Var {
        Var(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The distinguished variable of atomic positive designs.
    pub fn x0() -> Var {
        Var::new("x0")
    }

    pub fn is_generated(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a definition in a [`super::DefSystem`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefId(Arc<str>);

impl DefId {
    pub fn new(s: &str) -> DefId {
        DefId(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DefId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for DefId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of names with arities.
///
/// The names `*`/0 and `up`/1 are always available, as are the derived
/// names `pi1[a]`, `pi2[a]` (arity of `a`) and `wp[a,b]` (sum of arities).
/// A schematic signature stands for the infinite closure under derivation;
/// only the names actually recorded are enumerated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Name, usize>,
    schematic: bool,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// The names of the linear-logic connective table.
    pub fn linear() -> Signature {
        let mut sig = Signature::new();
        for (n, a) in [("*", 0), ("up", 1), ("pi1", 1), ("pi2", 1), ("wp", 2)] {
            sig.arities.insert(Name::new(n), a);
        }
        sig
    }

    pub fn schematic() -> Signature {
        Signature { arities: BTreeMap::new(), schematic: true }
    }

    pub fn is_schematic(&self) -> bool {
        self.schematic
    }

    pub fn from_arities<'a>(items: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Signature, DesignError> {
        let mut sig = Signature::new();
        for (n, a) in items {
            sig.declare(&Name::new(n), a)?;
        }
        Ok(sig)
    }

    /// Records a name. Fails if it is `x0` or clashes with a known arity.
    pub fn declare(&mut self, name: &Name, arity: usize) -> Result<(), DesignError> {
        if name.as_str() == "x0" {
            return Err(DesignError::ReservedName);
        }
        if let Some(known) = self.arity(name) {
            if known != arity {
                return Err(DesignError::Arity { name: name.clone(), expected: known, found: arity });
            }
        }
        self.arities.insert(name.clone(), arity);
        Ok(())
    }

    /// Records a name whose arity is determined by the reserved rules.
    pub fn ensure(&mut self, name: &Name) -> Result<usize, DesignError> {
        let a = self.arity(name).ok_or_else(|| DesignError::UnknownName(name.clone()))?;
        self.arities.insert(name.clone(), a);
        Ok(a)
    }

    pub fn arity(&self, name: &Name) -> Option<usize> {
        if let Some(&a) = self.arities.get(name) {
            return Some(a);
        }
        match name.as_str() {
            "*" => return Some(0),
            "up" => return Some(1),
            _ => {}
        }
        let (head, parts) = name.derived()?;
        match (head, parts.as_slice()) {
            ("pi1" | "pi2", [a]) => self.arity(a),
            ("wp", [a, b]) => Some(self.arity(a)? + self.arity(b)?),
            _ => None,
        }
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.arities.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.arities.iter().map(|(n, &a)| (n, a))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn merge(&mut self, other: &Signature) -> Result<(), DesignError> {
        for (n, a) in other.names() {
            self.declare(n, a)?;
        }
        self.schematic |= other.schematic;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_arities() {
        let sig = Signature::from_arities([("a", 2), ("b", 1)]).unwrap();
        assert_eq!(sig.arity(&Name::pi1(&Name::new("a"))), Some(2));
        let w = Name::wp(&Name::new("a"), &Name::pi2(&Name::new("b")));
        assert_eq!(w.as_str(), "wp[a,pi2[b]]");
        assert_eq!(sig.arity(&w), Some(3));
        assert_eq!(sig.arity(&Name::wp(&Name::star(), &Name::up())), Some(1));
        assert_eq!(sig.arity(&Name::new("c")), None);
    }

    #[test]
    fn reserved_clashes() {
        let mut sig = Signature::new();
        assert!(sig.declare(&Name::new("up"), 2).is_err());
        assert!(sig.declare(&Name::new("x0"), 0).is_err());
        assert!(sig.declare(&Name::new("a"), 1).is_ok());
        assert!(sig.declare(&Name::new("a"), 0).is_err());
    }
}
