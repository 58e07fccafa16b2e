//! Enumeration of finite models up to isomorphism.
//!
//! Tables are filled cell by cell in a depth-first search. After each
//! assignment the axioms reading the touched symbol are evaluated in Kleene
//! three-valued logic over the partial tables, and the branch is cut as soon as
//! one of them is definitely false. Leaves are brought to canonical form and
//! deduplicated.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature};
use crate::par;

use super::eval::{CFormula, CTerm};
use super::{compile, index_tuple, tuple_count, Compiled, FinStructure};

/// Functions of positive arity are only enumerated up to this size.
pub const MAX_FUNCTION_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Search nodes visited per domain size before giving up.
    pub max_nodes: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_nodes: 20_000_000,
        }
    }
}

const UNKNOWN: u8 = 2;
const UNSET: usize = usize::MAX;

struct Partial {
    n: usize,
    rel: Vec<Vec<u8>>,
    fun: Vec<Vec<usize>>,
}

impl Partial {
    fn term(&self, t: &CTerm, env: &[usize]) -> Option<usize> {
        match t {
            CTerm::Slot(s) => Some(env[*s]),
            CTerm::App(f, args) => {
                let mut idx = 0;
                for a in args {
                    idx = idx * self.n + self.term(a, env)?;
                }
                match self.fun[*f][idx] {
                    UNSET => None,
                    v => Some(v),
                }
            }
        }
    }

    fn rel(&self, r: usize, args: &[CTerm], env: &[usize]) -> Option<bool> {
        let mut idx = 0;
        for a in args {
            idx = idx * self.n + self.term(a, env)?;
        }
        match self.rel[r][idx] {
            UNKNOWN => None,
            v => Some(v == 1),
        }
    }

    /// Kleene value of `f`; `None` is "unknown".
    fn eval(&self, f: &CFormula, env: &mut Vec<usize>) -> Option<bool> {
        match f {
            CFormula::Rel(r, args) => self.rel(*r, args, env),
            CFormula::Eq(a, b) => Some(self.term(a, env)? == self.term(b, env)?),
            CFormula::Not(a) => self.eval(a, env).map(|v| !v),
            CFormula::And(a, b) => and3(self.eval(a, env), || self.eval(b, env)),
            CFormula::Or(a, b) => or3(self.eval(a, env), || self.eval(b, env)),
            CFormula::Implies(a, b) => or3(self.eval(a, env).map(|v| !v), || self.eval(b, env)),
            CFormula::Iff(a, b) => Some(self.eval(a, env)? == self.eval(b, env)?),
            CFormula::Forall(s, body) => self.all(*s, env, |p, env| p.eval(body, env)),
            CFormula::Exists(s, body) => self.any(*s, env, |p, env| p.eval(body, env)),
            CFormula::BForall(s, t, mem, body) => {
                let bound = self.term(t, env);
                self.all(*s, env, |p, env| {
                    let inside = bound.and_then(|b| match p.rel[*mem][env[*s] * p.n + b] {
                        UNKNOWN => None,
                        v => Some(v == 1),
                    });
                    or3(inside.map(|v| !v), || p.eval(body, env))
                })
            }
            CFormula::BExists(s, t, mem, body) => {
                let bound = self.term(t, env);
                self.any(*s, env, |p, env| {
                    let inside = bound.and_then(|b| match p.rel[*mem][env[*s] * p.n + b] {
                        UNKNOWN => None,
                        v => Some(v == 1),
                    });
                    and3(inside, || p.eval(body, env))
                })
            }
        }
    }

    fn all(
        &self,
        s: usize,
        env: &mut Vec<usize>,
        f: impl Fn(&Self, &mut Vec<usize>) -> Option<bool>,
    ) -> Option<bool> {
        let mut unknown = false;
        for e in 0..self.n {
            env[s] = e;
            match f(self, env) {
                Some(false) => return Some(false),
                None => unknown = true,
                Some(true) => {}
            }
        }
        if unknown {
            None
        } else {
            Some(true)
        }
    }

    fn any(
        &self,
        s: usize,
        env: &mut Vec<usize>,
        f: impl Fn(&Self, &mut Vec<usize>) -> Option<bool>,
    ) -> Option<bool> {
        let mut unknown = false;
        for e in 0..self.n {
            env[s] = e;
            match f(self, env) {
                Some(true) => return Some(true),
                None => unknown = true,
                Some(false) => {}
            }
        }
        if unknown {
            None
        } else {
            Some(false)
        }
    }
}

fn and3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    match a {
        Some(false) => Some(false),
        Some(true) => b(),
        None => match b() {
            Some(false) => Some(false),
            _ => None,
        },
    }
}

fn or3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    match a {
        Some(true) => Some(true),
        Some(false) => b(),
        None => match b() {
            Some(true) => Some(true),
            _ => None,
        },
    }
}

#[derive(Clone, Copy)]
enum Cell {
    Rel(usize, usize),
    Fun(usize, usize),
}

/// Relation tables and function tables of a finished candidate.
type Leaf = (Vec<Vec<bool>>, Vec<Vec<usize>>);

struct Search<'a> {
    partial: Partial,
    cells: Vec<Cell>,
    axioms: &'a [Compiled],
    /// Axioms to re-check after a cell of relation `r` (resp. function `f`) is set.
    by_rel: Vec<Vec<usize>>,
    by_fun: Vec<Vec<usize>>,
    env: Vec<usize>,
    nodes: u64,
    limit: u64,
    leaves: Vec<Leaf>,
}

impl Search<'_> {
    fn refuted(&mut self, which: &[usize]) -> bool {
        which
            .iter()
            .any(|&a| self.partial.eval(&self.axioms[a].root, &mut self.env) == Some(false))
    }

    fn run(&mut self, depth: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::CostGuard(format!(
                "structure enumeration exceeded {} search nodes at size {}",
                self.limit, self.partial.n
            )));
        }
        let Some(&cell) = self.cells.get(depth) else {
            if self
                .axioms
                .iter()
                .all(|a| self.partial.eval(&a.root, &mut self.env) == Some(true))
            {
                let rel = self
                    .partial
                    .rel
                    .iter()
                    .map(|t| t.iter().map(|&b| b == 1).collect())
                    .collect();
                self.leaves.push((rel, self.partial.fun.clone()));
            }
            return Ok(());
        };
        match cell {
            Cell::Rel(r, i) => {
                let watch = self.by_rel[r].clone();
                for v in [0u8, 1] {
                    self.partial.rel[r][i] = v;
                    if !self.refuted(&watch) {
                        self.run(depth + 1)?;
                    }
                }
                self.partial.rel[r][i] = UNKNOWN;
            }
            Cell::Fun(f, i) => {
                let watch = self.by_fun[f].clone();
                for v in 0..self.partial.n {
                    self.partial.fun[f][i] = v;
                    if !self.refuted(&watch) {
                        self.run(depth + 1)?;
                    }
                }
                self.partial.fun[f][i] = UNSET;
            }
        }
        Ok(())
    }
}

/// Isomorphism-invariant profile of element `x`.
fn profile(m: &FinStructure, x: usize) -> Vec<usize> {
    let n = m.size();
    let sig = m.signature();
    let mut out = Vec::new();
    for (r, sym) in sig.relations().iter().enumerate() {
        let mut counts = vec![0; sym.arity + 1];
        for i in 0..tuple_count(n, sym.arity) {
            if m.relation_table(r)[i] {
                let t = index_tuple(n, sym.arity, i);
                for (p, &e) in t.iter().enumerate() {
                    if e == x {
                        counts[p] += 1;
                    }
                }
                if t.iter().all(|&e| e == x) {
                    counts[sym.arity] += 1;
                }
            }
        }
        out.extend(counts);
    }
    for (f, sym) in sig.functions().iter().enumerate() {
        let table = m.function_table(f);
        out.push(table.iter().filter(|&&v| v == x).count());
        if sym.arity > 0 {
            out.push((table[super::tuple_index(n, &vec![x; sym.arity])] == x) as usize);
        }
    }
    out
}

/// Canonical copy of `m`: the least encoding among relabelings that list
/// elements by ascending profile.
pub(crate) fn canonical_form(m: &FinStructure) -> FinStructure {
    let n = m.size();
    let profiles: Vec<Vec<usize>> = (0..n).map(|x| profile(m, x)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| profiles[a].cmp(&profiles[b]));
    let blocks: Vec<Vec<usize>> = order
        .iter()
        .copied()
        .chunk_by(|&x| profiles[x].clone())
        .into_iter()
        .map(|(_, g)| g.collect())
        .collect();
    let mut best: Option<(Vec<u8>, FinStructure)> = None;
    let choices = blocks
        .iter()
        .map(|b| b.iter().copied().permutations(b.len()).collect::<Vec<_>>());
    for pick in choices.multi_cartesian_product() {
        // `pick` concatenated lists old elements in new order.
        let mut perm = vec![0; n];
        for (new, old) in pick.iter().flatten().enumerate() {
            perm[*old] = new;
        }
        let candidate = m.permute(&perm);
        let enc = candidate.encoding();
        if best.as_ref().is_none_or(|(b, _)| enc < *b) {
            best = Some((enc, candidate));
        }
    }
    best.map(|(_, s)| s).unwrap_or_else(|| m.clone())
}

/// Models of `axioms` with domain size exactly `size`, one per isomorphism class.
pub fn enumerate_of_size(
    sig: &Signature,
    size: usize,
    axioms: &[Formula],
    limits: EnumerationLimits,
) -> Result<Vec<FinStructure>> {
    if size == 0 {
        return Ok(Vec::new());
    }
    if size > MAX_FUNCTION_SIZE && sig.functions().iter().any(|f| f.arity > 0) {
        return Err(Error::CostGuard(format!(
            "function symbols of positive arity are enumerated only up to size {MAX_FUNCTION_SIZE}"
        )));
    }
    let compiled = axioms
        .iter()
        .map(|a| {
            if !a.is_sentence() {
                return Err(Error::InvalidFormula(format!(
                    "axiom `{a}` has free variables"
                )));
            }
            compile(a, sig)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut by_rel = vec![Vec::new(); sig.relations().len()];
    let mut by_fun = vec![Vec::new(); sig.functions().len()];
    for (i, c) in compiled.iter().enumerate() {
        for &r in c.relations_used() {
            if !by_rel[r].contains(&i) {
                by_rel[r].push(i);
            }
        }
        for &f in c.functions_used() {
            if !by_fun[f].contains(&i) {
                by_fun[f].push(i);
            }
        }
    }
    let mut cells = Vec::new();
    for (r, sym) in sig.relations().iter().enumerate() {
        cells.extend((0..tuple_count(size, sym.arity)).map(|i| Cell::Rel(r, i)));
    }
    for (f, sym) in sig.functions().iter().enumerate() {
        cells.extend((0..tuple_count(size, sym.arity)).map(|i| Cell::Fun(f, i)));
    }
    let slots = compiled
        .iter()
        .map(Compiled::slots)
        .max()
        .unwrap_or(0)
        .max(1);
    let mut search = Search {
        partial: Partial {
            n: size,
            rel: sig
                .relations()
                .iter()
                .map(|r| vec![UNKNOWN; tuple_count(size, r.arity)])
                .collect(),
            fun: sig
                .functions()
                .iter()
                .map(|f| vec![UNSET; tuple_count(size, f.arity)])
                .collect(),
        },
        cells,
        axioms: &compiled,
        by_rel,
        by_fun,
        env: vec![0; slots],
        nodes: 0,
        limit: limits.max_nodes,
        leaves: Vec::new(),
    };
    // Axioms over no symbol at all are decided before any cell is set.
    let closed: Vec<usize> = (0..compiled.len())
        .filter(|&i| {
            compiled[i].relations_used().is_empty() && compiled[i].functions_used().is_empty()
        })
        .collect();
    if search.refuted(&closed) {
        return Ok(Vec::new());
    }
    search.run(0)?;
    let leaves = std::mem::take(&mut search.leaves);
    let canon = par::map(&leaves, |(rel, fun)| {
        canonical_form(&FinStructure::from_tables(
            sig,
            size,
            rel.clone(),
            fun.clone(),
        ))
    });
    let unique: BTreeMap<Vec<u8>, FinStructure> =
        canon.into_iter().map(|s| (s.encoding(), s)).collect();
    Ok(unique.into_values().collect())
}

/// Models of `axioms` with domain sizes `1..=max_size`, one per isomorphism
/// class, ordered by size and then canonical encoding.
pub fn enumerate_structures(
    sig: &Signature,
    max_size: usize,
    axioms: &[Formula],
    limits: EnumerationLimits,
) -> Result<Vec<FinStructure>> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(enumerate_of_size(sig, size, axioms, limits)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn graph_axioms() -> Vec<Formula> {
        let sig = Signature::graph();
        [
            "(forall x (not (E x x)))",
            "(forall x (forall y (-> (E x y) (E y x))))",
        ]
        .iter()
        .map(|s| parse(s, &sig).unwrap())
        .collect()
    }

    #[test]
    fn simple_graph_counts() {
        let sig = Signature::graph();
        let ax = graph_axioms();
        let lim = EnumerationLimits::default();
        assert_eq!(enumerate_of_size(&sig, 3, &ax, lim).unwrap().len(), 4);
        assert_eq!(enumerate_structures(&sig, 3, &ax, lim).unwrap().len(), 7);
        assert_eq!(enumerate_of_size(&sig, 4, &ax, lim).unwrap().len(), 11);
    }

    #[test]
    fn unsatisfiable_axioms_give_nothing() {
        let sig = Signature::graph();
        let ax = vec![parse("(exists x (not (= x x)))", &sig).unwrap()];
        assert!(
            enumerate_structures(&sig, 3, &ax, EnumerationLimits::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn canonical_form_is_invariant() {
        let g = FinStructure::graph(4, &[(0, 1), (1, 2)]);
        let h = g.permute(&[3, 1, 0, 2]);
        assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn node_guard() {
        let sig = Signature::graph();
        let err = enumerate_of_size(&sig, 3, &[], EnumerationLimits { max_nodes: 10 }).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn unary_functions_guarded_above_five() {
        let mut sig = Signature::empty();
        sig.add_function("f", 1).unwrap();
        assert!(enumerate_of_size(&sig, 6, &[], EnumerationLimits::default()).is_err());
        // Unary functions on 2 points up to isomorphism: 3.
        assert_eq!(
            enumerate_of_size(&sig, 2, &[], EnumerationLimits::default())
                .unwrap()
                .len(),
            3
        );
    }
}
