//! Deterministic enumeration of formula templates.
//!
//! A template is a quantifier prefix over a fixed list of variables followed by
//! a conjunction or disjunction of literals. Templates are produced in tiers of
//! (variable count, quantifier rank, matrix size), lexicographically within a
//! tier, so every search built on them is reproducible. Literals are built
//! from relation atoms, equalities between distinct variables, the reflexive
//! equality on the first variable (which plays the role of ⊤/⊥), and function
//! graph atoms `f(v̄) = w`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::formula::{Formula, LevyClass, Quantifier, Signature, Term};
use crate::structure::{index_tuple, tuple_count};

pub const DEFAULT_MAX_LITERALS: usize = 2;
pub const DEFAULT_TEMPLATE_CAP: usize = 250_000;

const NAMES: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "t"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemplateBounds {
    /// Largest number of literals in a matrix.
    pub max_literals: usize,
    /// Largest number of templates a single search may generate.
    pub cap: usize,
}

impl Default for TemplateBounds {
    fn default() -> Self {
        TemplateBounds {
            max_literals: DEFAULT_MAX_LITERALS,
            cap: DEFAULT_TEMPLATE_CAP,
        }
    }
}

/// `n` variable names avoiding `avoid`.
pub fn var_names(n: usize, avoid: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(n);
    let mut i = 0usize;
    while out.len() < n {
        let name = if i < NAMES.len() {
            NAMES[i].to_string()
        } else {
            format!("x{i}")
        };
        i += 1;
        if !avoid.contains(&name) {
            out.push(name);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub(crate) struct Atom {
    pub formula: Formula,
    /// Bit `i` set when `vars[i]` occurs.
    pub mask: u64,
    pub reflexive: bool,
}

/// Atoms over `vars` in template order.
pub(crate) fn atoms(sig: &Signature, vars: &[String]) -> Vec<Atom> {
    let v = |i: usize| Term::Var(vars[i].clone());
    let mut out = Vec::new();
    if !vars.is_empty() {
        out.push(Atom {
            formula: Formula::Equal(v(0), v(0)),
            mask: 1,
            reflexive: true,
        });
    }
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            out.push(Atom {
                formula: Formula::Equal(v(i), v(j)),
                mask: (1 << i) | (1 << j),
                reflexive: false,
            });
        }
    }
    let n = vars.len();
    for sym in sig.relations() {
        for t in tuples(n, sym.arity) {
            let mask = t.iter().fold(0u64, |m, &i| m | (1 << i));
            let formula = if Some(sym.name.as_str()) == sig.membership() {
                Formula::Member(v(t[0]), v(t[1]))
            } else {
                Formula::Atom(sym.name.clone(), t.iter().map(|&i| v(i)).collect())
            };
            out.push(Atom {
                formula,
                mask,
                reflexive: false,
            });
        }
    }
    for sym in sig.functions() {
        for t in tuples(n, sym.arity) {
            for w in 0..n {
                let mask = t.iter().fold(1u64 << w, |m, &i| m | (1 << i));
                out.push(Atom {
                    formula: Formula::Equal(
                        Term::App(sym.name.clone(), t.iter().map(|&i| v(i)).collect()),
                        v(w),
                    ),
                    mask,
                    reflexive: false,
                });
            }
        }
    }
    out
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..tuple_count(n, k)).map(move |i| index_tuple(n, k, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Junction {
    Conj,
    Disj,
}

/// One family of templates: free parameters, a quantifier prefix over fresh
/// variables and the matrix connective.
#[derive(Debug, Clone)]
pub struct Shape {
    pub params: Vec<String>,
    pub prefix: Vec<(Quantifier, String)>,
    pub junction: Junction,
    /// Whether every parameter must occur in the matrix. Bound variables always must.
    pub require_params: bool,
}

impl Shape {
    fn vars(&self) -> Vec<String> {
        self.params
            .iter()
            .cloned()
            .chain(self.prefix.iter().map(|(_, v)| v.clone()))
            .collect()
    }
}

/// Literal combinations of exactly `size` literals for `shape`.
fn shape_formulas_of_size(
    sig: &Signature,
    shape: &Shape,
    size: usize,
    budget: &mut usize,
    cap: usize,
    out: &mut Vec<Formula>,
) -> Result<()> {
    let vars = shape.vars();
    let atoms = atoms(sig, &vars);
    let p = shape.params.len();
    let bound_mask: u64 = ((1u64 << vars.len()) - 1) & !((1u64 << p) - 1);
    let required = if shape.require_params {
        (1u64 << vars.len()) - 1
    } else {
        bound_mask
    };
    // Literal 2i is atom i, literal 2i+1 its negation.
    let lits = 2 * atoms.len();
    for combo in (0..lits).combinations(size) {
        if combo.windows(2).any(|w| w[0] / 2 == w[1] / 2) {
            continue;
        }
        if size > 1 && combo.iter().any(|&l| atoms[l / 2].reflexive) {
            continue;
        }
        let mask = combo.iter().fold(0u64, |m, &l| m | atoms[l / 2].mask);
        if mask & required != required {
            continue;
        }
        if *budget == 0 {
            return Err(Error::TemplateCap { cap });
        }
        *budget -= 1;
        let parts: Vec<Formula> = combo
            .iter()
            .map(|&l| {
                let a = atoms[l / 2].formula.clone();
                if l % 2 == 0 {
                    a
                } else {
                    Formula::not(a)
                }
            })
            .collect();
        let matrix = match shape.junction {
            Junction::Conj => Formula::conj(parts),
            Junction::Disj => Formula::disj(parts),
        }
        .expect("non-empty");
        let f = shape
            .prefix
            .iter()
            .rev()
            .fold(matrix, |acc, (q, v)| Formula::quant(*q, v.clone(), acc));
        out.push(f);
    }
    Ok(())
}

/// Expand shapes into formulas in tier order: (variable count, rank, matrix
/// size), then shape order, then literal order.
pub fn expand_shapes(
    sig: &Signature,
    shapes: &[Shape],
    bounds: TemplateBounds,
) -> Result<Vec<(usize, Formula)>> {
    let mut keyed: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (i, s) in shapes.iter().enumerate() {
        for size in 1..=bounds.max_literals {
            keyed.push((s.params.len() + s.prefix.len(), s.prefix.len(), size, i));
        }
    }
    keyed.sort();
    let mut budget = bounds.cap;
    let mut out = Vec::new();
    for (_, _, size, i) in keyed {
        let mut fs = Vec::new();
        shape_formulas_of_size(sig, &shapes[i], size, &mut budget, bounds.cap, &mut fs)?;
        out.extend(fs.into_iter().map(|f| (i, f)));
    }
    Ok(out)
}

/// Quantifier strings of length `0..=qrank` whose block structure lies in `class`.
pub fn class_prefixes(class: LevyClass, qrank: usize) -> Vec<Vec<Quantifier>> {
    let mut out = Vec::new();
    for len in 0..=qrank {
        for qs in tuples(2, len).map(|t| {
            t.into_iter()
                .map(|b| {
                    if b == 0 {
                        Quantifier::Exists
                    } else {
                        Quantifier::Forall
                    }
                })
                .collect::<Vec<_>>()
        }) {
            let blocks = qs.iter().dedup().count();
            if class.admits(qs.first().copied(), blocks) {
                out.push(qs);
            }
        }
    }
    out
}

/// Matrix connective for a prefix: conjunction under an innermost ∃ (or no
/// quantifier), disjunction under an innermost ∀.
pub fn junction_for(prefix: &[Quantifier]) -> Junction {
    match prefix.last() {
        Some(Quantifier::Forall) => Junction::Disj,
        _ => Junction::Conj,
    }
}

/// Shapes for formulas of `class` with `0..=max_params` parameters and rank ≤ `qrank`.
pub fn class_shapes(class: LevyClass, max_params: usize, qrank: usize) -> Vec<Shape> {
    let mut shapes = Vec::new();
    for p in 0..=max_params {
        for qs in class_prefixes(class, qrank) {
            if p == 0 && qs.is_empty() {
                continue;
            }
            let names = var_names(p + qs.len(), &[]);
            shapes.push(Shape {
                params: names[..p].to_vec(),
                prefix: qs.iter().copied().zip(names[p..].iter().cloned()).collect(),
                junction: junction_for(&qs),
                require_params: true,
            });
        }
    }
    shapes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::print;

    #[test]
    fn atom_order() {
        let vars = var_names(2, &[]);
        let got: Vec<String> = atoms(&Signature::graph(), &vars)
            .iter()
            .map(|a| print(&a.formula))
            .collect();
        assert_eq!(
            got,
            vec!["(= x x)", "(= x y)", "(E x x)", "(E x y)", "(E y x)", "(E y y)"]
        );
    }

    #[test]
    fn prefixes_by_class() {
        let s1 = class_prefixes(LevyClass::Sigma(1), 2);
        assert_eq!(s1.len(), 3);
        let p2 = class_prefixes(LevyClass::Pi(2), 2);
        // [], ∃, ∀, ∀∀, ∀∃, ∃∃
        assert_eq!(p2.len(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let shapes = class_shapes(LevyClass::Sigma(1), 2, 1);
        let err = expand_shapes(
            &Signature::graph(),
            &shapes,
            TemplateBounds {
                max_literals: 2,
                cap: 10,
            },
        );
        assert_eq!(err.unwrap_err(), Error::TemplateCap { cap: 10 });
    }

    #[test]
    fn no_complementary_literals() {
        let shapes = class_shapes(LevyClass::Sigma(1), 1, 1);
        let fs = expand_shapes(&Signature::graph(), &shapes, TemplateBounds::default()).unwrap();
        assert!(fs
            .iter()
            .all(|(_, f)| !print(f).contains("(and (E x y) (not (E x y)))")));
    }
}
