use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Relation and function symbols with arities. Constants are 0-ary functions.
/// At most one binary relation may be flagged as membership.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    relations: Vec<Symbol>,
    functions: Vec<Symbol>,
    membership: Option<String>,
    rel_index: HashMap<String, usize>,
    fun_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct SignatureFile {
    #[serde(default)]
    relations: Vec<(String, usize)>,
    #[serde(default)]
    functions: Vec<(String, usize)>,
    #[serde(default)]
    membership: Option<String>,
}

const RESERVED: &[&str] = &[
    "and",
    "or",
    "not",
    "->",
    "iff",
    "forall",
    "exists",
    "forall-in",
    "exists-in",
    "=",
];

impl Signature {
    pub fn new(
        relations: impl IntoIterator<Item = (impl Into<String>, usize)>,
        functions: impl IntoIterator<Item = (impl Into<String>, usize)>,
        membership: Option<&str>,
    ) -> Result<Self> {
        let mut sig = Signature::default();
        for (n, a) in relations {
            sig.add_relation(n, a)?;
        }
        for (n, a) in functions {
            sig.add_function(n, a)?;
        }
        if let Some(m) = membership {
            sig.set_membership(m)?;
        }
        Ok(sig)
    }

    /// The empty signature (pure equality).
    pub fn empty() -> Self {
        Signature::default()
    }

    /// One binary relation `E`.
    pub fn graph() -> Self {
        Signature::new([("E", 2)], Vec::<(String, usize)>::new(), None).expect("valid")
    }

    /// One binary relation `in` flagged as membership.
    pub fn membership_only() -> Self {
        Signature::new([("in", 2)], Vec::<(String, usize)>::new(), Some("in")).expect("valid")
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if name.is_empty() || RESERVED.contains(&name) {
            return Err(Error::InvalidSignature(format!(
                "`{name}` is not a usable symbol name"
            )));
        }
        if self.rel_index.contains_key(name) || self.fun_index.contains_key(name) {
            return Err(Error::InvalidSignature(format!(
                "duplicate symbol `{name}`"
            )));
        }
        Ok(())
    }

    pub fn add_relation(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.rel_index.insert(name.clone(), self.relations.len());
        self.relations.push(Symbol { name, arity });
        Ok(())
    }

    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.fun_index.insert(name.clone(), self.functions.len());
        self.functions.push(Symbol { name, arity });
        Ok(())
    }

    /// Flag `name` as the membership symbol, declaring it as a binary relation if needed.
    pub fn set_membership(&mut self, name: &str) -> Result<()> {
        if let Some(m) = &self.membership {
            if m != name {
                return Err(Error::InvalidSignature(format!(
                    "membership already flagged as `{m}`"
                )));
            }
        }
        match self.relation(name) {
            Some(s) if s.arity != 2 => {
                return Err(Error::InvalidSignature(format!(
                    "membership symbol `{name}` must be binary"
                )))
            }
            Some(_) => {}
            None => self.add_relation(name, 2)?,
        }
        self.membership = Some(name.to_string());
        Ok(())
    }

    pub fn relations(&self) -> &[Symbol] {
        &self.relations
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn membership(&self) -> Option<&str> {
        self.membership.as_deref()
    }

    pub fn membership_index(&self) -> Option<usize> {
        self.membership
            .as_deref()
            .and_then(|m| self.relation_index(m))
    }

    pub fn relation(&self, name: &str) -> Option<&Symbol> {
        self.relation_index(name).map(|i| &self.relations[i])
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.rel_index.get(name).copied()
    }

    pub fn function(&self, name: &str) -> Option<&Symbol> {
        self.function_index(name).map(|i| &self.functions[i])
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.fun_index.get(name).copied()
    }

    pub fn is_relational(&self) -> bool {
        self.functions.iter().all(|f| f.arity == 0)
    }

    pub fn names(&self) -> BTreeSet<&str> {
        self.relations
            .iter()
            .chain(&self.functions)
            .map(|s| s.name.as_str())
            .collect()
    }

    pub(crate) fn check_relation(&self, name: &str, arity: usize) -> Result<()> {
        match self.relation(name) {
            None => Err(Error::UndeclaredSymbol(name.to_string())),
            Some(s) if s.arity != arity => Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: s.arity,
                found: arity,
            }),
            Some(_) => Ok(()),
        }
    }

    pub(crate) fn check_function(&self, name: &str, arity: usize) -> Result<()> {
        match self.function(name) {
            None => Err(Error::UndeclaredSymbol(name.to_string())),
            Some(s) if s.arity != arity => Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: s.arity,
                found: arity,
            }),
            Some(_) => Ok(()),
        }
    }

    /// True when `self` extends `other` symbol by symbol, in order.
    pub fn extends(&self, other: &Signature) -> bool {
        self.relations.starts_with(&other.relations)
            && self.functions.starts_with(&other.functions)
            && (other.membership.is_none() || other.membership == self.membership)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SignatureFile = serde_json::from_str(text)?;
        let mut sig = Signature::new(raw.relations, raw.functions, None)?;
        if let Some(m) = raw.membership {
            sig.set_membership(&m)?;
        }
        Ok(sig)
    }

    pub fn to_json(&self) -> String {
        let raw = SignatureFile {
            relations: self
                .relations
                .iter()
                .map(|s| (s.name.clone(), s.arity))
                .collect(),
            functions: self
                .functions
                .iter()
                .map(|s| (s.name.clone(), s.arity))
                .collect(),
            membership: self.membership.clone(),
        };
        serde_json::to_string(&raw).expect("signature serializes")
    }
}

impl Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignatureFile {
            relations: self
                .relations
                .iter()
                .map(|x| (x.name.clone(), x.arity))
                .collect(),
            functions: self
                .functions
                .iter()
                .map(|x| (x.name.clone(), x.arity))
                .collect(),
            membership: self.membership.clone(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert!(Signature::new([("E", 2), ("E", 1)], Vec::<(String, usize)>::new(), None).is_err());
        assert!(Signature::new([("E", 2)], [("E", 1)], None).is_err());
    }

    #[test]
    fn membership_must_be_binary() {
        assert!(Signature::new([("in", 1)], Vec::<(String, usize)>::new(), Some("in")).is_err());
        let s = Signature::new(
            Vec::<(String, usize)>::new(),
            Vec::<(String, usize)>::new(),
            Some("in"),
        )
        .unwrap();
        assert_eq!(s.relation("in").unwrap().arity, 2);
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"relations":[["E",2]],"functions":[["f",1],["c",0]],"membership":null}"#;
        let sig = Signature::from_json(text).unwrap();
        assert_eq!(sig.to_json(), text);
        assert_eq!(sig.function("c").unwrap().arity, 0);
    }
}
