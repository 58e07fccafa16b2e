//! Compilation of membership-language formulas into formulas about codes.
//!
//! `θ_φ` speaks about relations on a finite set of nodes through three
//! predicates: `WFE r` (r is a valid code), `EQ r s` (r and s code the same
//! set) and `MEM r s` (the set coded by r is a member of the set coded by s).
//! Atoms are guarded by `WFE` on both sides and quantifiers are relativized to
//! `WFE`, so `θ_φ` holds of codes exactly when `φ` holds of the coded sets.

mod code_structure;
mod corpus;
mod verify;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature, Term};

pub use code_structure::{build_code_structure, CodeStructure, MAX_MATERIALIZED};
pub use corpus::{corpus, guard_mutation_cases, CorpusEntry, MutationCase, KURATOWSKI_PAIR};
pub use verify::{
    check_universal_form, universal_form, verify_translation, verify_translation_with,
    Counterexample, TranslationReport, UniversalForm, UniversalFormReport,
};

pub const WFE: &str = "WFE";
pub const EQ: &str = "EQ";
pub const MEM: &str = "MEM";

/// `{WFE¹, EQ², MEM²}`.
pub fn code_signature() -> Signature {
    Signature::new(
        [(WFE, 1), (EQ, 2), (MEM, 2)],
        Vec::<(String, usize)>::new(),
        None,
    )
    .expect("valid")
}

/// A translation with one family of `WFE` guards left out, for mutation tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardMutation {
    None,
    /// `θ_{x=y}` without its `WFE` conjuncts.
    DropEqualityGuards,
    /// `θ_{x∈y}` without its `WFE` conjuncts.
    DropMembershipGuards,
    /// `θ_{∃yψ} = ∃y θ_ψ`.
    DropExistsGuard,
    /// `θ_{∀yψ} = ∀y θ_ψ`.
    DropForallGuard,
}

fn var(t: &Term) -> Result<&str> {
    match t {
        Term::Var(v) => Ok(v),
        Term::App(name, _) => Err(Error::Unsupported(format!(
            "function symbol `{name}` in a set formula"
        ))),
    }
}

fn guarded(pred: &str, x: &str, y: &str, guards: bool) -> Formula {
    let core = Formula::atom(pred, &[x, y]);
    if guards {
        Formula::and(
            Formula::atom(WFE, &[x]),
            Formula::and(Formula::atom(WFE, &[y]), core),
        )
    } else {
        core
    }
}

fn go(f: &Formula, mutation: GuardMutation) -> Result<Formula> {
    let rec = |g: &Formula| go(g, mutation);
    Ok(match f {
        Formula::Equal(a, b) => guarded(
            EQ,
            var(a)?,
            var(b)?,
            mutation != GuardMutation::DropEqualityGuards,
        ),
        Formula::Member(a, b) => guarded(
            MEM,
            var(a)?,
            var(b)?,
            mutation != GuardMutation::DropMembershipGuards,
        ),
        Formula::Atom(name, args) if name == "in" && args.len() == 2 => guarded(
            MEM,
            var(&args[0])?,
            var(&args[1])?,
            mutation != GuardMutation::DropMembershipGuards,
        ),
        Formula::Atom(name, _) => {
            return Err(Error::Unsupported(format!(
                "relation `{name}`: only `=` and membership can be translated"
            )))
        }
        Formula::Not(a) => Formula::not(rec(a)?),
        Formula::And(a, b) => Formula::and(rec(a)?, rec(b)?),
        Formula::Or(a, b) => Formula::or(rec(a)?, rec(b)?),
        Formula::Implies(a, b) => Formula::implies(rec(a)?, rec(b)?),
        Formula::Iff(a, b) => Formula::iff(rec(a)?, rec(b)?),
        Formula::Exists(v, body) => {
            let t = rec(body)?;
            if mutation == GuardMutation::DropExistsGuard {
                Formula::exists(v.clone(), t)
            } else {
                Formula::exists(
                    v.clone(),
                    Formula::and(t, Formula::atom(WFE, &[v.as_str()])),
                )
            }
        }
        Formula::Forall(v, body) => {
            let t = rec(body)?;
            if mutation == GuardMutation::DropForallGuard {
                Formula::forall(v.clone(), t)
            } else {
                Formula::forall(
                    v.clone(),
                    Formula::implies(Formula::atom(WFE, &[v.as_str()]), t),
                )
            }
        }
        Formula::BoundedForall(..) | Formula::BoundedExists(..) => {
            unreachable!("desugared before translation")
        }
    })
}

/// `θ_f`. Bounded quantifiers are first desugared to guarded unbounded ones.
pub fn translate(f: &Formula) -> Result<Formula> {
    translate_with(f, GuardMutation::None)
}

pub fn translate_with(f: &Formula, mutation: GuardMutation) -> Result<Formula> {
    go(&f.desugar_bounded(), mutation)
}

/// `θ_f` with each code predicate replaced by a stand-in of the complexity of
/// its definition: `WFE` by a Π₁ formula, `EQ` and `MEM` by Σ₁ formulas.
/// Used to measure the Levy class of the translation.
pub fn translate_expanded(f: &Formula) -> Result<Formula> {
    let theta = translate(f)?;
    let mut fresh = 0usize;
    Ok(expand(&theta, &mut fresh))
}

fn expand(f: &Formula, fresh: &mut usize) -> Formula {
    let mut witness = || {
        *fresh += 1;
        format!("q{fresh}")
    };
    match f {
        Formula::Atom(name, args) => {
            let q = witness();
            let mut with_q = args.clone();
            with_q.push(Term::Var(q.clone()));
            let body = Formula::Atom(format!("{name}0"), with_q);
            if name == WFE {
                Formula::forall(q, body)
            } else {
                Formula::exists(q, body)
            }
        }
        Formula::Not(a) => Formula::not(expand(a, fresh)),
        Formula::And(a, b) => Formula::and(expand(a, fresh), expand(b, fresh)),
        Formula::Or(a, b) => Formula::or(expand(a, fresh), expand(b, fresh)),
        Formula::Implies(a, b) => Formula::implies(expand(a, fresh), expand(b, fresh)),
        Formula::Iff(a, b) => Formula::iff(expand(a, fresh), expand(b, fresh)),
        Formula::Forall(v, b) => Formula::forall(v.clone(), expand(b, fresh)),
        Formula::Exists(v, b) => Formula::exists(v.clone(), expand(b, fresh)),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{levy_classify, parse, print, LevyClass};

    fn tr(s: &str) -> String {
        let f = parse(s, &Signature::membership_only()).unwrap();
        print(&translate(&f).unwrap())
    }

    #[test]
    fn atom_clauses() {
        assert_eq!(tr("(= x y)"), "(and (WFE x) (and (WFE y) (EQ x y)))");
        assert_eq!(tr("(in x y)"), "(and (WFE x) (and (WFE y) (MEM x y)))");
    }

    #[test]
    fn quantifier_clauses() {
        assert_eq!(
            tr("(exists y (in x y))"),
            "(exists y (and (and (WFE x) (and (WFE y) (MEM x y))) (WFE y)))"
        );
        assert_eq!(
            tr("(forall y (in y x))"),
            "(forall y (-> (WFE y) (and (WFE y) (and (WFE x) (MEM y x)))))"
        );
    }

    #[test]
    fn bounded_quantifiers_are_desugared() {
        assert_eq!(
            tr("(forall-in w x (in w y))"),
            "(forall w (-> (WFE w) (-> (and (WFE w) (and (WFE x) (MEM w x))) (and (WFE w) (and (WFE y) (MEM w y))))))"
        );
    }

    #[test]
    fn rejects_other_relations() {
        let (f, _) = crate::formula::parse_inferring("(P x)").unwrap();
        assert!(matches!(translate(&f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn expanded_classification_shifts() {
        let f = parse("(exists y (in y x))", &Signature::membership_only()).unwrap();
        assert_eq!(levy_classify(&f), LevyClass::Sigma(1));
        assert_eq!(
            levy_classify(&translate_expanded(&f).unwrap()),
            LevyClass::Sigma(2)
        );
    }
}
