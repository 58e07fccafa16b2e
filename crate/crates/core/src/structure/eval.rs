//! Tarski semantics over finite structures.
//!
//! Formulas are compiled once against a signature: symbol names become table
//! indices and variables become slots in a flat environment.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature, Term};
use crate::structure::FinStructure;

#[derive(Debug, Clone)]
pub(crate) enum CTerm {
    Slot(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Debug, Clone)]
pub(crate) enum CFormula {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    Iff(Box<CFormula>, Box<CFormula>),
    Forall(usize, Box<CFormula>),
    Exists(usize, Box<CFormula>),
    /// Slot, bound term, membership relation index, body.
    BForall(usize, CTerm, usize, Box<CFormula>),
    BExists(usize, CTerm, usize, Box<CFormula>),
}

/// A formula compiled against a signature, with its free variables in slots
/// `0..free.len()`.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub(crate) root: CFormula,
    free: Vec<String>,
    slots: usize,
    relations: Vec<usize>,
    functions: Vec<usize>,
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<String>,
    max_slots: usize,
    relations: Vec<usize>,
    functions: Vec<usize>,
}

impl Compiler<'_> {
    fn slot(&self, v: &str) -> Result<usize> {
        self.scope
            .iter()
            .rposition(|x| x == v)
            .ok_or_else(|| Error::UnassignedVariable(v.to_string()))
    }

    fn term(&mut self, t: &Term) -> Result<CTerm> {
        Ok(match t {
            Term::Var(v) => CTerm::Slot(self.slot(v)?),
            Term::App(f, args) => {
                self.sig.check_function(f, args.len())?;
                let idx = self.sig.function_index(f).expect("checked");
                if !self.functions.contains(&idx) {
                    self.functions.push(idx);
                }
                CTerm::App(
                    idx,
                    args.iter().map(|a| self.term(a)).collect::<Result<_>>()?,
                )
            }
        })
    }

    fn bind<T>(&mut self, v: &str, f: impl FnOnce(&mut Self, usize) -> Result<T>) -> Result<T> {
        let slot = self.scope.len();
        self.scope.push(v.to_string());
        self.max_slots = self.max_slots.max(self.scope.len());
        let r = f(self, slot);
        self.scope.pop();
        r
    }

    fn membership(&mut self) -> Result<usize> {
        let idx = self.sig.membership_index().ok_or(Error::NoMembership)?;
        if !self.relations.contains(&idx) {
            self.relations.push(idx);
        }
        Ok(idx)
    }

    fn formula(&mut self, f: &Formula) -> Result<CFormula> {
        let b = |x: CFormula| Box::new(x);
        Ok(match f {
            Formula::Atom(r, args) => {
                self.sig.check_relation(r, args.len())?;
                let idx = self.sig.relation_index(r).expect("checked");
                if !self.relations.contains(&idx) {
                    self.relations.push(idx);
                }
                CFormula::Rel(
                    idx,
                    args.iter().map(|a| self.term(a)).collect::<Result<_>>()?,
                )
            }
            Formula::Equal(x, y) => CFormula::Eq(self.term(x)?, self.term(y)?),
            Formula::Member(x, y) => {
                let m = self.membership()?;
                CFormula::Rel(m, vec![self.term(x)?, self.term(y)?])
            }
            Formula::Not(a) => CFormula::Not(b(self.formula(a)?)),
            Formula::And(x, y) => CFormula::And(b(self.formula(x)?), b(self.formula(y)?)),
            Formula::Or(x, y) => CFormula::Or(b(self.formula(x)?), b(self.formula(y)?)),
            Formula::Implies(x, y) => CFormula::Implies(b(self.formula(x)?), b(self.formula(y)?)),
            Formula::Iff(x, y) => CFormula::Iff(b(self.formula(x)?), b(self.formula(y)?)),
            Formula::Forall(v, body) => {
                self.bind(v, |c, s| Ok(CFormula::Forall(s, b(c.formula(body)?))))?
            }
            Formula::Exists(v, body) => {
                self.bind(v, |c, s| Ok(CFormula::Exists(s, b(c.formula(body)?))))?
            }
            Formula::BoundedForall(v, t, body) | Formula::BoundedExists(v, t, body) => {
                let m = self.membership()?;
                let bound = self.term(t)?;
                let universal = matches!(f, Formula::BoundedForall(..));
                self.bind(v, |c, s| {
                    let body = b(c.formula(body)?);
                    Ok(if universal {
                        CFormula::BForall(s, bound, m, body)
                    } else {
                        CFormula::BExists(s, bound, m, body)
                    })
                })?
            }
        })
    }
}

/// Compile `f` with free variables in first-occurrence order.
pub fn compile(f: &Formula, sig: &Signature) -> Result<Compiled> {
    compile_with(f, sig, &f.free_vars())
}

impl Compiled {
    /// Compile with an explicit slot order for the free variables. `order` may
    /// list variables that do not occur in `f`.
    pub fn with_order(f: &Formula, sig: &Signature, order: &[String]) -> Result<Compiled> {
        compile_with(f, sig, order)
    }
}

fn compile_with(f: &Formula, sig: &Signature, order: &[String]) -> Result<Compiled> {
    if let Some(v) = f.free_vars().into_iter().find(|v| !order.contains(v)) {
        return Err(Error::UnassignedVariable(v));
    }
    let mut c = Compiler {
        sig,
        scope: order.to_vec(),
        max_slots: order.len(),
        relations: Vec::new(),
        functions: Vec::new(),
    };
    let root = c.formula(f)?;
    Ok(Compiled {
        root,
        free: order.to_vec(),
        slots: c.max_slots,
        relations: c.relations,
        functions: c.functions,
    })
}

#[inline]
fn term_value(m: &FinStructure, t: &CTerm, env: &[usize]) -> usize {
    match t {
        CTerm::Slot(s) => env[*s],
        CTerm::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, env)).collect();
            m.apply(*f, &vals)
        }
    }
}

fn holds(m: &FinStructure, f: &CFormula, env: &mut Vec<usize>) -> bool {
    match f {
        CFormula::Rel(r, args) => {
            let mut buf = [0usize; 8];
            if args.len() <= 8 {
                for (i, a) in args.iter().enumerate() {
                    buf[i] = term_value(m, a, env);
                }
                m.holds(*r, &buf[..args.len()])
            } else {
                let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, env)).collect();
                m.holds(*r, &vals)
            }
        }
        CFormula::Eq(a, b) => term_value(m, a, env) == term_value(m, b, env),
        CFormula::Not(a) => !holds(m, a, env),
        CFormula::And(a, b) => holds(m, a, env) && holds(m, b, env),
        CFormula::Or(a, b) => holds(m, a, env) || holds(m, b, env),
        CFormula::Implies(a, b) => !holds(m, a, env) || holds(m, b, env),
        CFormula::Iff(a, b) => holds(m, a, env) == holds(m, b, env),
        CFormula::Forall(s, body) => (0..m.size()).all(|e| {
            env[*s] = e;
            holds(m, body, env)
        }),
        CFormula::Exists(s, body) => (0..m.size()).any(|e| {
            env[*s] = e;
            holds(m, body, env)
        }),
        CFormula::BForall(s, t, mem, body) => {
            let bound = term_value(m, t, env);
            (0..m.size()).all(|e| {
                if !m.holds(*mem, &[e, bound]) {
                    return true;
                }
                env[*s] = e;
                holds(m, body, env)
            })
        }
        CFormula::BExists(s, t, mem, body) => {
            let bound = term_value(m, t, env);
            (0..m.size()).any(|e| {
                if !m.holds(*mem, &[e, bound]) {
                    return false;
                }
                env[*s] = e;
                holds(m, body, env)
            })
        }
    }
}

impl Compiled {
    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    /// Relation indices the formula reads.
    pub(crate) fn relations_used(&self) -> &[usize] {
        &self.relations
    }

    pub(crate) fn functions_used(&self) -> &[usize] {
        &self.functions
    }

    pub(crate) fn slots(&self) -> usize {
        self.slots
    }

    /// Evaluate with `args[i]` assigned to the `i`-th free variable.
    pub fn eval(&self, m: &FinStructure, args: &[usize]) -> bool {
        debug_assert_eq!(args.len(), self.free.len());
        let mut env = vec![0; self.slots.max(1)];
        env[..args.len()].copy_from_slice(args);
        holds(m, &self.root, &mut env)
    }
}

/// Truth of `f` in `m` under `a`. Quantifiers range over the whole domain;
/// bounded quantifiers over the members of the bound's value.
pub fn satisfies(m: &FinStructure, f: &Formula, a: &HashMap<String, usize>) -> Result<bool> {
    let c = compile(f, m.signature())?;
    let mut args = Vec::with_capacity(c.free.len());
    for v in &c.free {
        let x = *a
            .get(v)
            .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
        if x >= m.size() {
            return Err(Error::InvalidStructure(format!(
                "`{v}` assigned to {x}, outside the domain"
            )));
        }
        args.push(x);
    }
    Ok(c.eval(m, &args))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn check(m: &FinStructure, s: &str) -> bool {
        let f = parse(s, m.signature()).unwrap();
        satisfies(m, &f, &HashMap::new()).unwrap()
    }

    #[test]
    fn path_examples() {
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        assert!(check(&p3, "(exists x (exists y (E x y)))"));
        assert!(check(&p3, "(forall x (exists y (E x y)))"));
        let two = FinStructure::graph(2, &[]);
        assert!(!check(&two, "(forall x (exists y (E x y)))"));
    }

    #[test]
    fn errors() {
        let p3 = FinStructure::graph(3, &[(0, 1)]);
        let f = parse("(E x y)", p3.signature()).unwrap();
        let a: HashMap<String, usize> = [("x".to_string(), 0)].into();
        assert_eq!(
            satisfies(&p3, &f, &a),
            Err(Error::UnassignedVariable("y".into()))
        );
        let (g, _) = crate::formula::parse_inferring("(forall-in w x (= w w))").unwrap();
        assert_eq!(
            satisfies(&p3, &g, &[("x".to_string(), 0)].into()),
            Err(Error::NoMembership)
        );
    }

    #[test]
    fn bounded_quantifier_ranges_over_members() {
        let sig = Signature::membership_only();
        let mut m = FinStructure::new(&sig, 3).unwrap();
        m.set_relation("in", &[0, 2], true).unwrap();
        m.set_relation("in", &[1, 2], true).unwrap();
        let f = parse("(forall-in w x (not (= w x)))", &sig).unwrap();
        let c = compile(&f, &sig).unwrap();
        assert!(c.eval(&m, &[2]));
        let g = parse("(exists-in w x (= w w))", &sig).unwrap();
        let c = compile(&g, &sig).unwrap();
        assert!(c.eval(&m, &[2]));
        assert!(!c.eval(&m, &[0]));
    }

    #[test]
    fn function_terms() {
        let sig = Signature::new([("P", 1)], [("f", 1)], None).unwrap();
        let mut m = FinStructure::new(&sig, 2).unwrap();
        m.set_function("f", &[0], 1).unwrap();
        m.set_function("f", &[1], 1).unwrap();
        m.set_relation("P", &[1], true).unwrap();
        assert!(check(&m, "(forall x (P (f x)))"));
        assert!(!check(&m, "(forall x (P x))"));
    }
}
