//! Finite structures over a signature and brute-force semantics.

mod diagram;
mod elementary;
mod embed;
mod enumerate;
mod eval;
mod expand;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Signature;

pub use diagram::{atomic_diagram, Diagram};
pub use elementary::{is_elementary_up_to, ElementarityReport};
pub(crate) use embed::first_embedding;
pub use embed::{enumerate_embeddings, is_embedding, Embedding};
pub use enumerate::{enumerate_of_size, enumerate_structures, EnumerationLimits};
pub use eval::{compile, satisfies, Compiled};
pub use expand::expand_morley;

/// `n^k`, the number of `k`-tuples over an `n`-element domain.
pub(crate) fn tuple_count(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// Lexicographic rank of a tuple.
#[inline]
pub(crate) fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * n + x)
}

/// Inverse of [`tuple_index`].
pub(crate) fn index_tuple(n: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

/// A structure with domain `0..size`. Relations are stored as truth tables
/// and functions as value tables, both indexed by lexicographic tuple rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinStructure {
    sig: Signature,
    size: usize,
    relations: Vec<Vec<bool>>,
    functions: Vec<Vec<usize>>,
}

impl std::hash::Hash for Signature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.to_json().hash(state)
    }
}

impl FinStructure {
    /// All relations empty, all functions constantly 0.
    pub fn new(sig: &Signature, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidStructure("domain must be non-empty".into()));
        }
        Ok(FinStructure {
            sig: sig.clone(),
            size,
            relations: sig
                .relations()
                .iter()
                .map(|r| vec![false; tuple_count(size, r.arity)])
                .collect(),
            functions: sig
                .functions()
                .iter()
                .map(|f| vec![0; tuple_count(size, f.arity)])
                .collect(),
        })
    }

    pub(crate) fn from_tables(
        sig: &Signature,
        size: usize,
        relations: Vec<Vec<bool>>,
        functions: Vec<Vec<usize>>,
    ) -> Self {
        FinStructure {
            sig: sig.clone(),
            size,
            relations,
            functions,
        }
    }

    /// Graph on `size` vertices with the given undirected edges.
    pub fn graph(size: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = FinStructure::new(&Signature::graph(), size).expect("non-empty");
        for &(a, b) in edges {
            g.set_relation("E", &[a, b], true).expect("in range");
            g.set_relation("E", &[b, a], true).expect("in range");
        }
        g
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_tuple(&self, tuple: &[usize]) -> Result<()> {
        match tuple.iter().find(|&&x| x >= self.size) {
            Some(x) => Err(Error::InvalidStructure(format!(
                "element {x} outside domain of size {}",
                self.size
            ))),
            None => Ok(()),
        }
    }

    pub fn set_relation(&mut self, name: &str, tuple: &[usize], value: bool) -> Result<()> {
        let idx = self
            .sig
            .relation_index(name)
            .ok_or_else(|| Error::UndeclaredSymbol(name.into()))?;
        self.sig.check_relation(name, tuple.len())?;
        self.check_tuple(tuple)?;
        self.relations[idx][tuple_index(self.size, tuple)] = value;
        Ok(())
    }

    pub fn set_function(&mut self, name: &str, args: &[usize], value: usize) -> Result<()> {
        let idx = self
            .sig
            .function_index(name)
            .ok_or_else(|| Error::UndeclaredSymbol(name.into()))?;
        self.sig.check_function(name, args.len())?;
        self.check_tuple(args)?;
        self.check_tuple(&[value])?;
        self.functions[idx][tuple_index(self.size, args)] = value;
        Ok(())
    }

    #[inline]
    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        self.relations[rel][tuple_index(self.size, tuple)]
    }

    #[inline]
    pub fn apply(&self, fun: usize, args: &[usize]) -> usize {
        self.functions[fun][tuple_index(self.size, args)]
    }

    pub fn relation_table(&self, rel: usize) -> &[bool] {
        &self.relations[rel]
    }

    pub fn function_table(&self, fun: usize) -> &[usize] {
        &self.functions[fun]
    }

    /// Tuples of relation `name`, in lexicographic order.
    pub fn tuples(&self, name: &str) -> Vec<Vec<usize>> {
        let Some(idx) = self.sig.relation_index(name) else {
            return Vec::new();
        };
        let k = self.sig.relations()[idx].arity;
        self.relations[idx]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| index_tuple(self.size, k, i))
            .collect()
    }

    /// The image of this structure under the bijection `perm` (old element ↦ new element).
    pub fn permute(&self, perm: &[usize]) -> FinStructure {
        let n = self.size;
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let relations = self
            .sig
            .relations()
            .iter()
            .enumerate()
            .map(|(r, sym)| {
                (0..tuple_count(n, sym.arity))
                    .map(|i| {
                        let t: Vec<usize> = index_tuple(n, sym.arity, i)
                            .into_iter()
                            .map(|x| inv[x])
                            .collect();
                        self.holds(r, &t)
                    })
                    .collect()
            })
            .collect();
        let functions = self
            .sig
            .functions()
            .iter()
            .enumerate()
            .map(|(f, sym)| {
                (0..tuple_count(n, sym.arity))
                    .map(|i| {
                        let t: Vec<usize> = index_tuple(n, sym.arity, i)
                            .into_iter()
                            .map(|x| inv[x])
                            .collect();
                        perm[self.apply(f, &t)]
                    })
                    .collect()
            })
            .collect();
        FinStructure::from_tables(&self.sig, n, relations, functions)
    }

    /// Bit/byte string used for canonical ordering: relation tables in
    /// signature order, then function tables.
    pub fn encoding(&self) -> Vec<u8> {
        let mut out: Vec<u8> = Vec::new();
        for t in &self.relations {
            out.extend(t.iter().map(|&b| b as u8));
        }
        for t in &self.functions {
            out.extend(t.iter().map(|&v| v as u8));
        }
        out
    }

    /// Expand with fresh constants `names[i]` interpreted as `values[i]`.
    pub fn with_constants(
        &self,
        sig: &Signature,
        names: &[String],
        values: &[usize],
    ) -> Result<FinStructure> {
        if !sig.extends(&self.sig) {
            return Err(Error::SignatureMismatch(
                "constant expansion must extend the signature".into(),
            ));
        }
        let mut out = FinStructure::new(sig, self.size)?;
        out.relations[..self.relations.len()].clone_from_slice(&self.relations);
        out.functions[..self.functions.len()].clone_from_slice(&self.functions);
        for (name, &v) in names.iter().zip(values) {
            out.set_function(name, &[], v)?;
        }
        Ok(out)
    }

    pub fn to_file(&self) -> StructureFile {
        let relations = self
            .sig
            .relations()
            .iter()
            .map(|r| (r.name.clone(), self.tuples(&r.name)))
            .collect();
        let functions = self
            .sig
            .functions()
            .iter()
            .enumerate()
            .map(|(f, sym)| {
                let rows = (0..tuple_count(self.size, sym.arity))
                    .map(|i| {
                        let mut row = index_tuple(self.size, sym.arity, i);
                        row.push(self.functions[f][i]);
                        row
                    })
                    .collect();
                (sym.name.clone(), rows)
            })
            .collect();
        StructureFile {
            size: self.size,
            relations,
            functions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("structure serializes")
    }

    /// Read a structure file. Without `sig`, the signature is inferred from the
    /// tuples (relations with no tuples then default to arity 2).
    pub fn from_json(text: &str, sig: Option<&Signature>) -> Result<FinStructure> {
        let file: StructureFile = serde_json::from_str(text)?;
        FinStructure::from_file(&file, sig)
    }

    pub fn from_file(file: &StructureFile, sig: Option<&Signature>) -> Result<FinStructure> {
        let sig = match sig {
            Some(s) => s.clone(),
            None => {
                let mut s = Signature::empty();
                for (name, tuples) in &file.relations {
                    s.add_relation(name.clone(), tuples.first().map_or(2, Vec::len))?;
                }
                for (name, rows) in &file.functions {
                    let arity =
                        rows.first()
                            .map(|r| r.len().saturating_sub(1))
                            .ok_or_else(|| {
                                Error::InvalidStructure(format!("function `{name}` has no rows"))
                            })?;
                    s.add_function(name.clone(), arity)?;
                }
                s
            }
        };
        let mut m = FinStructure::new(&sig, file.size)?;
        for (name, tuples) in &file.relations {
            for t in tuples {
                m.set_relation(name, t, true)?;
            }
        }
        for (name, rows) in &file.functions {
            let arity = sig
                .function(name)
                .ok_or_else(|| Error::UndeclaredSymbol(name.clone()))?
                .arity;
            if rows.len() != tuple_count(file.size, arity) {
                return Err(Error::InvalidStructure(format!(
                    "function `{name}` is not total"
                )));
            }
            for row in rows {
                let (val, args) = row
                    .split_last()
                    .ok_or_else(|| Error::InvalidStructure("empty row".into()))?;
                m.set_function(name, args, *val)?;
            }
        }
        for f in sig.functions() {
            if !file.functions.contains_key(&f.name) {
                return Err(Error::InvalidStructure(format!(
                    "function `{}` missing",
                    f.name
                )));
            }
        }
        Ok(m)
    }
}

/// JSON layout `{"size":n,"relations":{"E":[[0,1],…]},"functions":{"f":[[args…,val],…]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub size: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<Vec<usize>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_index_roundtrip() {
        for i in 0..27 {
            assert_eq!(tuple_index(3, &index_tuple(3, 3, i)), i);
        }
    }

    #[test]
    fn json_roundtrip_with_functions() {
        let sig = Signature::new([("E", 2)], [("f", 1), ("c", 0)], None).unwrap();
        let mut m = FinStructure::new(&sig, 3).unwrap();
        m.set_relation("E", &[0, 2], true).unwrap();
        m.set_function("f", &[1], 2).unwrap();
        m.set_function("c", &[], 1).unwrap();
        let text = m.to_json();
        assert_eq!(FinStructure::from_json(&text, Some(&sig)).unwrap(), m);
        assert_eq!(
            FinStructure::from_json(&text, None).unwrap().to_json(),
            text
        );
    }

    #[test]
    fn out_of_range_rejected() {
        let mut g = FinStructure::graph(2, &[]);
        assert!(g.set_relation("E", &[0, 2], true).is_err());
        assert!(FinStructure::new(&Signature::graph(), 0).is_err());
        let bad = r#"{"size":2,"relations":{},"functions":{"f":[[0,1]]}}"#;
        let sig = Signature::new(Vec::<(String, usize)>::new(), [("f", 1)], None).unwrap();
        assert!(FinStructure::from_json(bad, Some(&sig)).is_err());
    }

    #[test]
    fn permute_is_isomorphic_copy() {
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        let q = p3.permute(&[1, 0, 2]);
        assert_eq!(
            q.tuples("E"),
            vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0]]
        );
    }
}
