//! Reference semantics and generators shared by the integration tests.
//!
//! The evaluator here walks the syntax tree with a name-keyed environment and
//! reads the structure only through its public accessors. It shares no code
//! with the compiled evaluator.

#![allow(dead_code)]

use std::collections::HashMap;

use modelcomp::formula::{Formula, Signature, Term};
use modelcomp::FinStructure;
use proptest::prelude::*;

pub type Env = HashMap<String, usize>;

pub fn term(m: &FinStructure, t: &Term, env: &Env) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term(m, a, env)).collect();
            m.apply(m.signature().function_index(f).unwrap(), &vals)
        }
    }
}

fn member(m: &FinStructure, a: usize, b: usize) -> bool {
    let r = m.signature().membership_index().expect("membership symbol");
    m.holds(r, &[a, b])
}

fn with<R>(env: &mut Env, v: &str, x: usize, k: impl FnOnce(&mut Env) -> R) -> R {
    let old = env.insert(v.to_string(), x);
    let r = k(env);
    match old {
        Some(o) => env.insert(v.to_string(), o),
        None => env.remove(v),
    };
    r
}

/// Tarski satisfaction by direct recursion.
pub fn naive(m: &FinStructure, f: &Formula, env: &mut Env) -> bool {
    match f {
        Formula::Atom(r, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term(m, a, env)).collect();
            m.holds(m.signature().relation_index(r).unwrap(), &vals)
        }
        Formula::Equal(a, b) => term(m, a, env) == term(m, b, env),
        Formula::Member(a, b) => member(m, term(m, a, env), term(m, b, env)),
        Formula::Not(g) => !naive(m, g, env),
        Formula::And(a, b) => naive(m, a, env) && naive(m, b, env),
        Formula::Or(a, b) => naive(m, a, env) || naive(m, b, env),
        Formula::Implies(a, b) => !naive(m, a, env) || naive(m, b, env),
        Formula::Iff(a, b) => naive(m, a, env) == naive(m, b, env),
        Formula::Forall(v, g) => (0..m.size()).all(|x| with(env, v, x, |e| naive(m, g, e))),
        Formula::Exists(v, g) => (0..m.size()).any(|x| with(env, v, x, |e| naive(m, g, e))),
        Formula::BoundedForall(v, t, g) => {
            let b = term(m, t, env);
            (0..m.size()).all(|x| !member(m, x, b) || with(env, v, x, |e| naive(m, g, e)))
        }
        Formula::BoundedExists(v, t, g) => {
            let b = term(m, t, env);
            (0..m.size()).any(|x| member(m, x, b) && with(env, v, x, |e| naive(m, g, e)))
        }
    }
}

pub fn naive_sentence(m: &FinStructure, f: &Formula) -> bool {
    naive(m, f, &mut Env::new())
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// `E/2`, `P/1`, `f/1`, `c/0`.
pub fn mixed_signature() -> Signature {
    Signature::new([("E", 2), ("P", 1)], [("f", 1), ("c", 0)], None).unwrap()
}

fn var() -> impl Strategy<Value = Term> {
    prop::sample::select(VARS.to_vec()).prop_map(Term::var)
}

fn mixed_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => var(),
        1 => var().prop_map(|t| Term::App("f".into(), vec![t])),
        1 => Just(Term::App("c".into(), Vec::new())),
    ]
}

/// A variable distinct from `v`, since a bound may not mention its own variable.
fn other_var(v: &str, k: usize) -> Term {
    let i = VARS.iter().position(|w| *w == v).unwrap();
    Term::var(VARS[(i + k) % VARS.len()])
}

fn quantified(leaf: BoxedStrategy<Formula>, bounded: bool) -> impl Strategy<Value = Formula> {
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let v = prop::sample::select(VARS.to_vec());
        let mut choices = vec![
            inner.clone().prop_map(Formula::not).boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::and(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::or(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::implies(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::iff(a, b))
                .boxed(),
            (v.clone(), inner.clone())
                .prop_map(|(v, g)| Formula::forall(v, g))
                .boxed(),
            (v.clone(), inner.clone())
                .prop_map(|(v, g)| Formula::exists(v, g))
                .boxed(),
        ];
        if bounded {
            choices.push(
                (v.clone(), 1..3usize, inner.clone())
                    .prop_map(|(v, k, g)| {
                        Formula::BoundedForall(v.into(), other_var(v, k), Box::new(g))
                    })
                    .boxed(),
            );
            choices.push(
                (v, 1..3usize, inner)
                    .prop_map(|(v, k, g)| {
                        Formula::BoundedExists(v.into(), other_var(v, k), Box::new(g))
                    })
                    .boxed(),
            );
        }
        prop::strategy::Union::new(choices)
    })
}

/// Formulas over [`mixed_signature`] with variables among x, y, z.
pub fn mixed_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (mixed_term(), mixed_term()).prop_map(|(a, b)| Formula::Atom("E".into(), vec![a, b])),
        mixed_term().prop_map(|a| Formula::Atom("P".into(), vec![a])),
        (mixed_term(), mixed_term()).prop_map(|(a, b)| Formula::Equal(a, b)),
    ]
    .boxed();
    quantified(leaf, false)
}

/// Membership-language formulas, including bounded quantifiers.
pub fn membership_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (var(), var()).prop_map(|(a, b)| Formula::Member(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::Equal(a, b)),
    ]
    .boxed();
    quantified(leaf, true)
}

/// A structure over `sig` of size `1..=max` with uniformly random tables.
pub fn structure(sig: Signature, max: usize) -> impl Strategy<Value = FinStructure> {
    (1..=max).prop_flat_map(move |n| {
        let sig = sig.clone();
        let rel_cells: usize = sig.relations().iter().map(|r| n.pow(r.arity as u32)).sum();
        let fun_cells: usize = sig.functions().iter().map(|f| n.pow(f.arity as u32)).sum();
        (
            prop::collection::vec(any::<bool>(), rel_cells),
            prop::collection::vec(0..n, fun_cells),
        )
            .prop_map(move |(bits, vals)| fill(&sig, n, &bits, &vals))
    })
}

fn fill(sig: &Signature, n: usize, bits: &[bool], vals: &[usize]) -> FinStructure {
    let mut m = FinStructure::new(sig, n).unwrap();
    let mut bits = bits.iter();
    for r in sig.relations() {
        for t in tuples(n, r.arity) {
            m.set_relation(&r.name, &t, *bits.next().unwrap()).unwrap();
        }
    }
    let mut vals = vals.iter();
    for f in sig.functions() {
        for t in tuples(n, f.arity) {
            m.set_function(&f.name, &t, *vals.next().unwrap()).unwrap();
        }
    }
    m
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

/// Every simple graph on `n` labelled vertices.
pub fn labelled_graphs(n: usize) -> Vec<FinStructure> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    (0..1usize << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            FinStructure::graph(n, &edges)
        })
        .collect()
}

/// Assignment of `x, y, z` to the given values.
pub fn env3(vals: [usize; 3]) -> Env {
    VARS.iter().map(|v| v.to_string()).zip(vals).collect()
}
