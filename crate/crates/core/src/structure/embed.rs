use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{index_tuple, tuple_count, FinStructure};

/// Injective map from a source domain into a target domain that preserves and
/// reflects every relation and commutes with every function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn identity(n: usize) -> Self {
        Embedding {
            map: (0..n).collect(),
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Embedding) -> Embedding {
        Embedding {
            map: self.map.iter().map(|&x| g.map[x]).collect(),
        }
    }

    pub fn apply(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&x| self.map[x]).collect()
    }
}

fn same_signature(m: &FinStructure, n: &FinStructure) -> Result<()> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch(
            "source and target signatures differ".into(),
        ));
    }
    Ok(())
}

/// Check every atomic condition on an arbitrary map.
pub fn is_embedding(m: &FinStructure, n: &FinStructure, map: &[usize]) -> Result<bool> {
    same_signature(m, n)?;
    if map.len() != m.size() || map.iter().any(|&x| x >= n.size()) {
        return Ok(false);
    }
    let mut seen = vec![false; n.size()];
    for &x in map {
        if std::mem::replace(&mut seen[x], true) {
            return Ok(false);
        }
    }
    let img = |t: &[usize]| -> Vec<usize> { t.iter().map(|&x| map[x]).collect() };
    for (r, sym) in m.signature().relations().iter().enumerate() {
        for i in 0..tuple_count(m.size(), sym.arity) {
            let t = index_tuple(m.size(), sym.arity, i);
            if m.holds(r, &t) != n.holds(r, &img(&t)) {
                return Ok(false);
            }
        }
    }
    for (f, sym) in m.signature().functions().iter().enumerate() {
        for i in 0..tuple_count(m.size(), sym.arity) {
            let t = index_tuple(m.size(), sym.arity, i);
            if n.apply(f, &img(&t)) != map[m.apply(f, &t)] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the partial map on `0..=last` still satisfies every condition
/// whose elements all lie in `0..=last` and mention `last`.
fn extends_ok(m: &FinStructure, n: &FinStructure, map: &[usize]) -> bool {
    let last = map.len() - 1;
    let dom = map.len();
    let img = |t: &[usize]| -> Vec<usize> { t.iter().map(|&x| map[x]).collect() };
    for (r, sym) in m.signature().relations().iter().enumerate() {
        for i in 0..tuple_count(dom, sym.arity) {
            let t = index_tuple(dom, sym.arity, i);
            if !t.contains(&last) {
                continue;
            }
            if m.holds(r, &t) != n.holds(r, &img(&t)) {
                return false;
            }
        }
    }
    for (f, sym) in m.signature().functions().iter().enumerate() {
        for i in 0..tuple_count(dom, sym.arity) {
            let t = index_tuple(dom, sym.arity, i);
            if sym.arity > 0 && !t.contains(&last) {
                continue;
            }
            let v = m.apply(f, &t);
            if v < dom && n.apply(f, &img(&t)) != map[v] {
                return false;
            }
        }
    }
    // Function values landing on `last` from tuples fixed earlier.
    for (f, sym) in m.signature().functions().iter().enumerate() {
        for i in 0..tuple_count(dom, sym.arity) {
            let t = index_tuple(dom, sym.arity, i);
            if m.apply(f, &t) == last && n.apply(f, &img(&t)) != map[last] {
                return false;
            }
        }
    }
    true
}

/// All embeddings of `m` into `n`, in lexicographic order of their maps.
pub fn enumerate_embeddings(m: &FinStructure, n: &FinStructure) -> Result<Vec<Embedding>> {
    same_signature(m, n)?;
    let mut out = Vec::new();
    if m.size() > n.size() {
        return Ok(out);
    }
    let mut map = Vec::with_capacity(m.size());
    let mut used = vec![false; n.size()];
    fn go(
        m: &FinStructure,
        n: &FinStructure,
        map: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Embedding>,
    ) {
        if map.len() == m.size() {
            out.push(Embedding { map: map.clone() });
            return;
        }
        for y in 0..n.size() {
            if used[y] {
                continue;
            }
            map.push(y);
            used[y] = true;
            if extends_ok(m, n, map) {
                go(m, n, map, used, out);
            }
            used[y] = false;
            map.pop();
        }
    }
    go(m, n, &mut map, &mut used, &mut out);
    debug_assert!(out
        .iter()
        .all(|e| is_embedding(m, n, &e.map).unwrap_or(false)));
    Ok(out)
}

/// First embedding in lexicographic order, if any.
pub(crate) fn first_embedding(m: &FinStructure, n: &FinStructure) -> Result<Option<Embedding>> {
    // The structures are tiny; enumerating everything keeps a single code path.
    Ok(enumerate_embeddings(m, n)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> FinStructure {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        FinStructure::graph(n, &edges)
    }

    #[test]
    fn counts() {
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(enumerate_embeddings(&k(2), &p3).unwrap().len(), 4);
        assert_eq!(enumerate_embeddings(&k(2), &k(2)).unwrap().len(), 2);
        assert_eq!(enumerate_embeddings(&k(3), &p3).unwrap().len(), 0);
    }

    #[test]
    fn lexicographic_order() {
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        let maps: Vec<_> = enumerate_embeddings(&k(2), &p3)
            .unwrap()
            .into_iter()
            .map(|e| e.map)
            .collect();
        assert_eq!(maps, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn signature_mismatch() {
        let other = FinStructure::new(&crate::formula::Signature::empty(), 2).unwrap();
        assert!(enumerate_embeddings(&k(2), &other).is_err());
    }
}
