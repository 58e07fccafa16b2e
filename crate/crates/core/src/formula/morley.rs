//! Signature expansion by definitional relation symbols and Skolem functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MorleyKind {
    /// `R_φ(x̄) ↔ φ(x̄)`.
    Relation,
    /// `∃y φ(y, x̄) → φ(f_φ(x̄), x̄)`; the first free variable is the witness.
    Skolem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorleySymbol {
    #[serde(serialize_with = "crate::formula::morley::ser_formula")]
    pub source: Formula,
    pub kind: MorleyKind,
    pub symbol: String,
    pub arity: usize,
    /// Free variables of `source` in first-occurrence order.
    pub vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorleyizationResult {
    pub base: Signature,
    pub signature: Signature,
    #[serde(serialize_with = "crate::formula::morley::ser_formulas")]
    pub axioms: Vec<Formula>,
    pub symbols: Vec<MorleySymbol>,
}

pub(crate) fn ser_formula<S: serde::Serializer>(
    f: &Formula,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

pub(crate) fn ser_formulas<S: serde::Serializer>(
    fs: &[Formula],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(|f| f.to_string()))
}

/// Expand `sig` with one symbol per selected formula, named `R_<i>` or `f_<i>`
/// after its position in `selected`, and emit the defining axioms.
pub fn morleyize(
    sig: &Signature,
    selected: &[(Formula, MorleyKind)],
) -> Result<MorleyizationResult> {
    let mut signature = sig.clone();
    let mut axioms = Vec::with_capacity(selected.len());
    let mut symbols = Vec::with_capacity(selected.len());
    for (i, (phi, kind)) in selected.iter().enumerate() {
        phi.validate(sig)?;
        if selected[..i].iter().any(|(p, k)| p == phi && k == kind) {
            return Err(Error::DuplicateSelection(phi.to_string()));
        }
        let phi = phi.rename_apart();
        let vars = phi.free_vars();
        let closure = |body: Formula, vs: &[String]| {
            vs.iter()
                .rev()
                .fold(body, |acc, v| Formula::forall(v.clone(), acc))
        };
        let (symbol, arity, axiom) = match kind {
            MorleyKind::Relation => {
                let name = format!("R_{i}");
                let atom = Formula::Atom(
                    name.clone(),
                    vars.iter().map(|v| Term::var(v.as_str())).collect(),
                );
                signature.add_relation(name.clone(), vars.len())?;
                (
                    name,
                    vars.len(),
                    closure(Formula::iff(phi.clone(), atom), &vars),
                )
            }
            MorleyKind::Skolem => {
                let (witness, rest) = vars.split_first().ok_or_else(|| {
                    Error::FreeVarMismatch(format!("Skolem formula `{phi}` has no free variable"))
                })?;
                let name = format!("f_{i}");
                let app = Term::App(
                    name.clone(),
                    rest.iter().map(|v| Term::var(v.as_str())).collect(),
                );
                signature.add_function(name.clone(), rest.len())?;
                let body = Formula::implies(
                    Formula::exists(witness.clone(), phi.clone()),
                    phi.substitute(witness, &app),
                );
                (name, rest.len(), closure(body, rest))
            }
        };
        debug_assert!(axiom.is_sentence());
        axioms.push(axiom);
        symbols.push(MorleySymbol {
            source: phi,
            kind: *kind,
            symbol,
            arity,
            vars,
        });
    }
    Ok(MorleyizationResult {
        base: sig.clone(),
        signature,
        axioms,
        symbols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, print};

    #[test]
    fn relation_axiom() {
        let sig = Signature::graph();
        let phi = parse("(exists y (E x y))", &sig).unwrap();
        let mr = morleyize(&sig, &[(phi, MorleyKind::Relation)]).unwrap();
        assert_eq!(mr.signature.relation("R_0").unwrap().arity, 1);
        assert_eq!(
            print(&mr.axioms[0]),
            "(forall x (iff (exists y (E x y)) (R_0 x)))"
        );
    }

    #[test]
    fn empty_selection() {
        let sig = Signature::graph();
        let mr = morleyize(&sig, &[]).unwrap();
        assert_eq!(mr.signature, sig);
        assert!(mr.axioms.is_empty());
    }

    #[test]
    fn skolem_axiom_matches_up_to_renaming() {
        let sig = Signature::graph();
        let phi = parse("(E x y)", &sig).unwrap();
        let mr = morleyize(&sig, &[(phi, MorleyKind::Skolem)]).unwrap();
        assert_eq!(mr.signature.function("f_0").unwrap().arity, 1);
        let mut expanded = sig.clone();
        expanded.add_function("f_0", 1).unwrap();
        let expected = parse(
            "(forall x (-> (exists y (E y x)) (E (f_0 x) x)))",
            &expanded,
        )
        .unwrap();
        assert!(mr.axioms[0].alpha_eq(&expected) || rename_check(&mr.axioms[0], &expected));
    }

    fn rename_check(a: &Formula, b: &Formula) -> bool {
        a.normalize() == b.normalize()
    }

    #[test]
    fn errors() {
        let sig = Signature::graph();
        let closed = parse("(exists y (E y y))", &sig).unwrap();
        assert!(matches!(
            morleyize(&sig, &[(closed, MorleyKind::Skolem)]),
            Err(Error::FreeVarMismatch(_))
        ));
        let phi = parse("(E x y)", &sig).unwrap();
        assert!(matches!(
            morleyize(
                &sig,
                &[
                    (phi.clone(), MorleyKind::Relation),
                    (phi, MorleyKind::Relation)
                ]
            ),
            Err(Error::DuplicateSelection(_))
        ));
    }
}
