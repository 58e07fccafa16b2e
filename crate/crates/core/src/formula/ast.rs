use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Function application; constants are 0-ary applications.
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Equal(Term, Term),
    Member(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    BoundedForall(String, Term, Box<Formula>),
    BoundedExists(String, Term, Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Term::Var(x) => x == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    fn rename(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(x) if x == from => Term::Var(to.to_string()),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.rename(from, to)).collect())
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl Formula {
    pub fn atom(rel: impl Into<String>, vars: &[&str]) -> Self {
        Formula::Atom(rel.into(), vars.iter().map(|v| Term::var(*v)).collect())
    }

    pub fn eq_vars(a: &str, b: &str) -> Self {
        Formula::Equal(Term::var(a), Term::var(b))
    }

    pub fn mem_vars(a: &str, b: &str) -> Self {
        Formula::Member(Term::var(a), Term::var(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn quant(q: Quantifier, v: impl Into<String>, body: Formula) -> Self {
        match q {
            Quantifier::Forall => Formula::forall(v, body),
            Quantifier::Exists => Formula::exists(v, body),
        }
    }

    /// Right-nested conjunction; `None` for an empty list.
    pub fn conj(parts: Vec<Formula>) -> Option<Formula> {
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::and(f, acc))
    }

    /// Right-nested disjunction; `None` for an empty list.
    pub fn disj(parts: Vec<Formula>) -> Option<Formula> {
        parts.into_iter().rev().reduce(|acc, f| Formula::or(f, acc))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let push_term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            for v in t.vars() {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| push_term(t, bound, out)),
            Formula::Equal(a, b) | Formula::Member(a, b) => {
                push_term(a, bound, out);
                push_term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::BoundedForall(v, t, body) | Formula::BoundedExists(v, t, body) => {
                push_term(t, bound, out);
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|t| out.extend(t.vars())),
            Formula::Equal(a, b) | Formula::Member(a, b) => {
                out.extend(a.vars());
                out.extend(b.vars());
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            Formula::BoundedForall(v, t, _) | Formula::BoundedExists(v, t, _) => {
                out.insert(v.clone());
                out.extend(t.vars());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(..) | Formula::Equal(..) | Formula::Member(..) => {}
            Formula::Not(a) => a.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::BoundedForall(_, _, a)
            | Formula::BoundedExists(_, _, a) => a.visit(f),
        }
    }

    /// Number of AST nodes, terms included.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Equal(a, b) | Formula::Member(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::BoundedForall(_, t, a) | Formula::BoundedExists(_, t, a) => {
                1 + t.size() + a.size()
            }
        }
    }

    /// True when the formula contains an unbounded quantifier.
    pub fn has_unbounded_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::Forall(..) | Formula::Exists(..)) {
                found = true;
            }
        });
        found
    }

    /// Nesting depth of quantifiers, bounded ones included.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Equal(..) | Formula::Member(..) => 0,
            Formula::Not(a) => a.quantifier_rank(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::BoundedForall(_, _, a)
            | Formula::BoundedExists(_, _, a) => 1 + a.quantifier_rank(),
        }
    }

    /// Replace free occurrences of `from` by the variable `to`. The caller
    /// guarantees `to` is not captured.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let rt = |t: &Term| t.rename(from, to);
        match self {
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(rt).collect()),
            Formula::Equal(a, b) => Formula::Equal(rt(a), rt(b)),
            Formula::Member(a, b) => Formula::Member(rt(a), rt(b)),
            Formula::Not(a) => Formula::not(a.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_free(from, to), b.rename_free(from, to))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Forall(v, body) | Formula::Exists(v, body) if v == from => self.clone(),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.rename_free(from, to)),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.rename_free(from, to)),
            Formula::BoundedForall(v, t, body) => {
                let body = if v == from {
                    (**body).clone()
                } else {
                    body.rename_free(from, to)
                };
                Formula::BoundedForall(v.clone(), rt(t), Box::new(body))
            }
            Formula::BoundedExists(v, t, body) => {
                let body = if v == from {
                    (**body).clone()
                } else {
                    body.rename_free(from, to)
                };
                Formula::BoundedExists(v.clone(), rt(t), Box::new(body))
            }
        }
    }

    /// Replace free occurrences of variable `v` by `term` (capture is the caller's concern).
    pub fn substitute(&self, v: &str, term: &Term) -> Formula {
        fn st(t: &Term, v: &str, term: &Term) -> Term {
            match t {
                Term::Var(x) if x == v => term.clone(),
                Term::Var(_) => t.clone(),
                Term::App(f, args) => {
                    Term::App(f.clone(), args.iter().map(|a| st(a, v, term)).collect())
                }
            }
        }
        match self {
            Formula::Atom(r, args) => {
                Formula::Atom(r.clone(), args.iter().map(|a| st(a, v, term)).collect())
            }
            Formula::Equal(a, b) => Formula::Equal(st(a, v, term), st(b, v, term)),
            Formula::Member(a, b) => Formula::Member(st(a, v, term), st(b, v, term)),
            Formula::Not(a) => Formula::not(a.substitute(v, term)),
            Formula::And(a, b) => Formula::and(a.substitute(v, term), b.substitute(v, term)),
            Formula::Or(a, b) => Formula::or(a.substitute(v, term), b.substitute(v, term)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(v, term), b.substitute(v, term))
            }
            Formula::Iff(a, b) => Formula::iff(a.substitute(v, term), b.substitute(v, term)),
            Formula::Forall(x, _) | Formula::Exists(x, _) if x == v => self.clone(),
            Formula::Forall(x, body) => Formula::forall(x.clone(), body.substitute(v, term)),
            Formula::Exists(x, body) => Formula::exists(x.clone(), body.substitute(v, term)),
            Formula::BoundedForall(x, t, body) => {
                let body = if x == v {
                    (**body).clone()
                } else {
                    body.substitute(v, term)
                };
                Formula::BoundedForall(x.clone(), st(t, v, term), Box::new(body))
            }
            Formula::BoundedExists(x, t, body) => {
                let body = if x == v {
                    (**body).clone()
                } else {
                    body.substitute(v, term)
                };
                Formula::BoundedExists(x.clone(), st(t, v, term), Box::new(body))
            }
        }
    }

    /// Rewrite bounded quantifiers as guarded unbounded ones:
    /// `(forall-in w t φ)` becomes `(forall w (-> (in w t) φ))` and
    /// `(exists-in w t φ)` becomes `(exists w (and (in w t) φ))`.
    pub fn desugar_bounded(&self) -> Formula {
        self.map_bottom_up(&|f| match f {
            Formula::BoundedForall(w, t, body) => Formula::forall(
                w.clone(),
                Formula::implies(Formula::Member(Term::Var(w.clone()), t.clone()), *body),
            ),
            Formula::BoundedExists(w, t, body) => Formula::exists(
                w.clone(),
                Formula::and(Formula::Member(Term::Var(w.clone()), t.clone()), *body),
            ),
            other => other,
        })
    }

    /// Rebuild the tree bottom-up, applying `g` to each rebuilt node.
    pub fn map_bottom_up(&self, g: &dyn Fn(Formula) -> Formula) -> Formula {
        let node = match self {
            Formula::Atom(..) | Formula::Equal(..) | Formula::Member(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.map_bottom_up(g)),
            Formula::And(a, b) => Formula::and(a.map_bottom_up(g), b.map_bottom_up(g)),
            Formula::Or(a, b) => Formula::or(a.map_bottom_up(g), b.map_bottom_up(g)),
            Formula::Implies(a, b) => Formula::implies(a.map_bottom_up(g), b.map_bottom_up(g)),
            Formula::Iff(a, b) => Formula::iff(a.map_bottom_up(g), b.map_bottom_up(g)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.map_bottom_up(g)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.map_bottom_up(g)),
            Formula::BoundedForall(v, t, a) => {
                Formula::BoundedForall(v.clone(), t.clone(), Box::new(a.map_bottom_up(g)))
            }
            Formula::BoundedExists(v, t, a) => {
                Formula::BoundedExists(v.clone(), t.clone(), Box::new(a.map_bottom_up(g)))
            }
        };
        g(node)
    }

    /// Rename bound variables so that no variable is bound twice and no bound
    /// variable coincides with a free one. Names already satisfying this are kept.
    pub fn rename_apart(&self) -> Formula {
        let mut used: BTreeSet<String> = self.free_vars().into_iter().collect();
        let mut fresh = FreshNames::new(self.all_vars());
        self.rename_apart_inner(&mut used, &mut fresh)
    }

    fn rename_apart_inner(&self, used: &mut BTreeSet<String>, fresh: &mut FreshNames) -> Formula {
        let bind =
            |v: &String, body: &Formula, used: &mut BTreeSet<String>, fresh: &mut FreshNames| {
                let name = if used.contains(v) {
                    fresh.next()
                } else {
                    v.clone()
                };
                used.insert(name.clone());
                let body = if &name != v {
                    body.rename_free(v, &name)
                } else {
                    body.clone()
                };
                (name, body.rename_apart_inner(used, fresh))
            };
        match self {
            Formula::Atom(..) | Formula::Equal(..) | Formula::Member(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.rename_apart_inner(used, fresh)),
            Formula::And(a, b) => {
                let a = a.rename_apart_inner(used, fresh);
                Formula::and(a, b.rename_apart_inner(used, fresh))
            }
            Formula::Or(a, b) => {
                let a = a.rename_apart_inner(used, fresh);
                Formula::or(a, b.rename_apart_inner(used, fresh))
            }
            Formula::Implies(a, b) => {
                let a = a.rename_apart_inner(used, fresh);
                Formula::implies(a, b.rename_apart_inner(used, fresh))
            }
            Formula::Iff(a, b) => {
                let a = a.rename_apart_inner(used, fresh);
                Formula::iff(a, b.rename_apart_inner(used, fresh))
            }
            Formula::Forall(v, body) => {
                let (n, b) = bind(v, body, used, fresh);
                Formula::forall(n, b)
            }
            Formula::Exists(v, body) => {
                let (n, b) = bind(v, body, used, fresh);
                Formula::exists(n, b)
            }
            Formula::BoundedForall(v, t, body) => {
                let (n, b) = bind(v, body, used, fresh);
                Formula::BoundedForall(n, t.clone(), Box::new(b))
            }
            Formula::BoundedExists(v, t, body) => {
                let (n, b) = bind(v, body, used, fresh);
                Formula::BoundedExists(n, t.clone(), Box::new(b))
            }
        }
    }

    /// Canonical renaming of bound variables to `v0`, `v1`, … in binding order,
    /// skipping names that occur free.
    pub fn normalize(&self) -> Formula {
        let free: BTreeSet<String> = self.free_vars().into_iter().collect();
        let mut counter = 0usize;
        self.normalize_inner(&free, &mut counter)
    }

    fn normalize_inner(&self, free: &BTreeSet<String>, counter: &mut usize) -> Formula {
        let next = |counter: &mut usize| loop {
            let name = format!("v{counter}");
            *counter += 1;
            if !free.contains(&name) {
                return name;
            }
        };
        match self {
            Formula::Atom(..) | Formula::Equal(..) | Formula::Member(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.normalize_inner(free, counter)),
            Formula::And(a, b) => {
                let a = a.normalize_inner(free, counter);
                Formula::and(a, b.normalize_inner(free, counter))
            }
            Formula::Or(a, b) => {
                let a = a.normalize_inner(free, counter);
                Formula::or(a, b.normalize_inner(free, counter))
            }
            Formula::Implies(a, b) => {
                let a = a.normalize_inner(free, counter);
                Formula::implies(a, b.normalize_inner(free, counter))
            }
            Formula::Iff(a, b) => {
                let a = a.normalize_inner(free, counter);
                Formula::iff(a, b.normalize_inner(free, counter))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let n = next(counter);
                // The new name is fresh w.r.t. free names and earlier binders; inner
                // binders are renamed afterwards, so no capture can happen.
                let body = body
                    .rename_free(v, &format!("\u{0}{n}"))
                    .normalize_inner(free, counter);
                let body = body.rename_free(&format!("\u{0}{n}"), &n);
                Formula::quant(
                    if matches!(self, Formula::Forall(..)) {
                        Quantifier::Forall
                    } else {
                        Quantifier::Exists
                    },
                    n,
                    body,
                )
            }
            Formula::BoundedForall(v, t, body) | Formula::BoundedExists(v, t, body) => {
                let n = next(counter);
                let body = body
                    .rename_free(v, &format!("\u{0}{n}"))
                    .normalize_inner(free, counter);
                let body = Box::new(body.rename_free(&format!("\u{0}{n}"), &n));
                if matches!(self, Formula::BoundedForall(..)) {
                    Formula::BoundedForall(n, t.clone(), body)
                } else {
                    Formula::BoundedExists(n, t.clone(), body)
                }
            }
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.free_vars() == other.free_vars() && self.normalize() == other.normalize()
    }

    /// Check symbols against `sig` and the bounded-quantifier side condition.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let mut err = None;
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            let r = match f {
                Formula::Atom(r, args) => sig
                    .check_relation(r, args.len())
                    .and_then(|_| check_terms(sig, args)),
                Formula::Equal(a, b) => check_terms(sig, &[a.clone(), b.clone()]),
                Formula::Member(a, b) => {
                    if sig.membership().is_none() {
                        Err(Error::NoMembership)
                    } else {
                        check_terms(sig, &[a.clone(), b.clone()])
                    }
                }
                Formula::BoundedForall(v, t, _) | Formula::BoundedExists(v, t, _) => {
                    if sig.membership().is_none() {
                        Err(Error::NoMembership)
                    } else if t.contains_var(v) {
                        Err(Error::InvalidFormula(format!(
                            "bound term of `{v}` mentions `{v}`"
                        )))
                    } else {
                        check_terms(sig, std::slice::from_ref(t))
                    }
                }
                _ => Ok(()),
            };
            if let Err(e) = r {
                err = Some(e);
            }
        });
        err.map_or(Ok(()), Err)
    }
}

fn check_terms(sig: &Signature, terms: &[Term]) -> Result<()> {
    for t in terms {
        if let Term::App(f, args) = t {
            sig.check_function(f, args.len())?;
            check_terms(sig, args)?;
        }
    }
    Ok(())
}

/// Supplies `v0`, `v1`, … avoiding a set of taken names.
pub(crate) struct FreshNames {
    taken: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    pub(crate) fn new(taken: BTreeSet<String>) -> Self {
        FreshNames { taken, counter: 0 }
    }

    pub(crate) fn next(&mut self) -> String {
        loop {
            let name = format!("v{}", self.counter);
            self.counter += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::formula::print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
