use crate::error::{Error, Result};
use crate::formula::{Formula, Signature, Term};
use crate::structure::{index_tuple, tuple_count, FinStructure};

/// Atomic diagram of a structure: literals over fresh element constants.
#[derive(Debug, Clone)]
pub struct Diagram {
    /// The structure's signature plus constants `c0 … c(n-1)`.
    pub signature: Signature,
    pub constants: Vec<String>,
    pub sentences: Vec<Formula>,
}

/// Every relation literal on constant tuples, the function graph on constant
/// tuples, and all distinctness literals `¬(ci = cj)` for `i < j`.
pub fn atomic_diagram(m: &FinStructure) -> Result<Diagram> {
    let n = m.size();
    let mut signature = m.signature().clone();
    let constants: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    for c in &constants {
        signature.add_function(c.clone(), 0).map_err(|_| {
            Error::InvalidSignature(format!("constant `{c}` clashes with the signature"))
        })?;
    }
    let konst = |i: usize| Term::App(constants[i].clone(), Vec::new());
    let mut sentences = Vec::new();
    for (r, sym) in m.signature().relations().iter().enumerate() {
        for i in 0..tuple_count(n, sym.arity) {
            let t = index_tuple(n, sym.arity, i);
            let atom = if Some(sym.name.as_str()) == m.signature().membership() && sym.arity == 2 {
                Formula::Member(konst(t[0]), konst(t[1]))
            } else {
                Formula::Atom(sym.name.clone(), t.iter().map(|&x| konst(x)).collect())
            };
            sentences.push(if m.holds(r, &t) {
                atom
            } else {
                Formula::not(atom)
            });
        }
    }
    for (f, sym) in m.signature().functions().iter().enumerate() {
        for i in 0..tuple_count(n, sym.arity) {
            let t = index_tuple(n, sym.arity, i);
            let app = Term::App(sym.name.clone(), t.iter().map(|&x| konst(x)).collect());
            sentences.push(Formula::Equal(app, konst(m.apply(f, &t))));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            sentences.push(Formula::not(Formula::Equal(konst(i), konst(j))));
        }
    }
    Ok(Diagram {
        signature,
        constants,
        sentences,
    })
}
