use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{levy_classify, Formula, LevyClass, Signature, Term};
use crate::hf::{eval_in_domain, HFDomain, HFSet};
use crate::par;
use crate::structure::{index_tuple, tuple_count, Compiled, FinStructure};

use super::{build_code_structure, code_signature, translate_with, CodeStructure, GuardMutation};

/// The quotient evaluation is cross-checked against evaluation over every
/// relation when the universe has at most this many relations...
const FULL_UNIVERSE_LIMIT: u64 = 1 << 9;
/// ...and `universe^rank` stays below this.
const BRUTE_FORCE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Free variables with their values as set literals.
    pub assignment: Vec<(String, String)>,
    pub sets: bool,
    pub codes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    #[serde(serialize_with = "crate::formula::morley::ser_formula")]
    pub formula: Formula,
    #[serde(serialize_with = "crate::formula::morley::ser_formula")]
    pub translation: Formula,
    pub m: usize,
    /// `Some(k)` when free variables range over `HF(k)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub assignments: usize,
    pub passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Whether the quotient evaluation was also checked over every relation.
    pub brute_force_checked: bool,
    pub relativization: String,
}

/// `(M, ∈)` restricted to the sets of `domain`.
pub(crate) fn membership_structure(domain: &HFDomain) -> Result<FinStructure> {
    let codes = domain.codes();
    let sig = Signature::membership_only();
    let mut s = FinStructure::new(&sig, codes.len().max(1))?;
    for (i, &a) in codes.iter().enumerate() {
        for (j, &b) in codes.iter().enumerate() {
            if crate::hf::member(a, b) {
                s.set_relation("in", &[i, j], true)?;
            }
        }
    }
    Ok(s)
}

fn relativization(m: usize) -> String {
    format!("set quantifiers range over sets with transitive closure of size < {m}; code quantifiers over relations on {m} nodes")
}

pub fn verify_translation(
    f: &Formula,
    m: usize,
    level: Option<usize>,
) -> Result<TranslationReport> {
    verify_translation_with(f, m, level, GuardMutation::None)
}

/// Compare `f` over the sets of transitive closure below `m` with its
/// translation over the relations on `m` nodes, for every assignment of the
/// free variables (to those sets, or to `HF(level)`).
pub fn verify_translation_with(
    f: &Formula,
    m: usize,
    level: Option<usize>,
    mutation: GuardMutation,
) -> Result<TranslationReport> {
    let theta = translate_with(f, mutation)?;
    let code = build_code_structure(m)?;
    let domain = HFDomain::tc_below(m)?;
    let sets = membership_structure(&domain)?;
    let vars = f.free_vars();
    let lhs = Compiled::with_order(f, sets.signature(), &vars)?;
    let rhs = Compiled::with_order(&theta, &code_signature(), &vars)?;
    // Assignment values as positions in `domain`.
    let values: Vec<usize> = match level {
        None => (0..domain.codes().len()).collect(),
        Some(k) => HFDomain::level(k)?
            .codes()
            .iter()
            .map(|c| {
                domain.codes().binary_search(c).map_err(|_| {
                    Error::BoundMismatch(format!(
                        "{} ∈ HF({k}) has no code on {m} nodes",
                        HFSet::from_ackermann(*c)
                    ))
                })
            })
            .collect::<Result<_>>()?,
    };
    let p = vars.len();
    let total = tuple_count(values.len(), p);
    let to_class = |pos: usize| code.element_of_set(&HFSet::from_ackermann(domain.codes()[pos]));
    let hit = par::find_first(total, |i| {
        let args: Vec<usize> = index_tuple(values.len(), p, i)
            .into_iter()
            .map(|j| values[j])
            .collect();
        let classes: Vec<usize> = args
            .iter()
            .map(|&a| to_class(a).expect("domain sets have codes"))
            .collect();
        let a = lhs.eval(&sets, &args);
        let b = rhs.eval(&code.quotient, &classes);
        (a != b).then(|| Counterexample {
            assignment: vars
                .iter()
                .zip(&args)
                .map(|(v, &x)| {
                    (
                        v.clone(),
                        HFSet::from_ackermann(domain.codes()[x]).to_string(),
                    )
                })
                .collect(),
            sets: a,
            codes: b,
        })
    });
    let brute_force_checked = brute_force_cross_check(&theta, &code, &vars, &values, &domain)?;
    Ok(TranslationReport {
        formula: f.clone(),
        translation: theta,
        m,
        level,
        assignments: total,
        passes: hit.is_none(),
        counterexample: hit.map(|(_, c)| c),
        brute_force_checked,
        relativization: relativization(m),
    })
}

/// Evaluate `theta` over the full relation universe, assigning each free
/// variable its canonical code, and compare with the quotient. Runs only when
/// the universe is small enough; returns whether it ran.
fn brute_force_cross_check(
    theta: &Formula,
    code: &CodeStructure,
    vars: &[String],
    values: &[usize],
    domain: &HFDomain,
) -> Result<bool> {
    let depth = theta.quantifier_rank() as u32;
    let cost = code.universe.checked_pow(depth.max(1));
    if code.universe > FULL_UNIVERSE_LIMIT || cost.is_none_or(|c| c > BRUTE_FORCE_LIMIT) {
        return Ok(false);
    }
    let full = full_code_structure(code)?;
    let c = Compiled::with_order(theta, &code_signature(), vars)?;
    let p = vars.len();
    for i in 0..tuple_count(values.len(), p) {
        let sets: Vec<HFSet> = index_tuple(values.len(), p, i)
            .into_iter()
            .map(|j| HFSet::from_ackermann(domain.codes()[values[j]]))
            .collect();
        let masks: Vec<usize> = sets
            .iter()
            .map(|a| canonical_mask(a, code.m) as usize)
            .collect();
        let classes = sets
            .iter()
            .map(|a| code.element_of_set(a))
            .collect::<Result<Vec<_>>>()?;
        if c.eval(&full, &masks) != c.eval(&code.quotient, &classes) {
            return Err(Error::InvalidStructure(format!(
                "quotient evaluation disagrees with the full code structure at {:?}",
                sets.iter().map(|s| s.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    Ok(true)
}

/// The canonical code of `a` as a relation mask on `m` nodes.
fn canonical_mask(a: &HFSet, m: usize) -> u64 {
    crate::hf::encode(a)
        .rel
        .iter()
        .fold(0u64, |acc, &(u, v)| acc | 1 << (u * m + v))
}

/// Every relation on `m` nodes as an element, with the code predicates.
fn full_code_structure(code: &CodeStructure) -> Result<FinStructure> {
    let n = code.universe as usize;
    let elems: Vec<usize> = (0..n)
        .map(|r| code.element_of(r as u64))
        .collect::<Result<_>>()?;
    let junk = code.junk();
    let sig = code_signature();
    let mem = sig.relation_index(super::MEM).expect("declared");
    let mut s = FinStructure::new(&sig, n)?;
    for r in 0..n {
        if elems[r] == junk {
            continue;
        }
        s.set_relation(super::WFE, &[r], true)?;
        for t in 0..n {
            if elems[t] == junk {
                continue;
            }
            if elems[r] == elems[t] {
                s.set_relation(super::EQ, &[r, t], true)?;
            }
            if code.quotient.holds(mem, &[elems[r], elems[t]]) {
                s.set_relation(super::MEM, &[r, t], true)?;
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalForm {
    #[serde(serialize_with = "crate::formula::morley::ser_formula")]
    pub formula: Formula,
    /// The code-language formula that `Theta_f` names.
    #[serde(serialize_with = "crate::formula::morley::ser_formula")]
    pub theta: Formula,
    pub code_vars: Vec<String>,
}

/// `∀r̄ (⋀ Cod(rᵢ, xᵢ) → Theta_f(r̄))` for a Σ₁ formula `f`.
pub fn universal_form(f: &Formula) -> Result<UniversalForm> {
    if !LevyClass::Sigma(1).contains(levy_classify(f)) {
        return Err(Error::NotSigma1(f.to_string()));
    }
    let theta = translate_with(f, GuardMutation::None)?;
    let free = f.free_vars();
    let taken = f.all_vars();
    let code_vars: Vec<String> = if free.len() == 1 && !taken.contains("r") {
        vec!["r".to_string()]
    } else {
        let mut out = Vec::new();
        let mut i = 1;
        while out.len() < free.len() {
            let name = format!("r{i}");
            if !taken.contains(&name) {
                out.push(name);
            }
            i += 1;
        }
        out
    };
    let head = Formula::Atom(
        "Theta_f".into(),
        code_vars.iter().map(|r| Term::Var(r.clone())).collect(),
    );
    let links = Formula::conj(
        code_vars
            .iter()
            .zip(&free)
            .map(|(r, x)| Formula::atom("Cod", &[r.as_str(), x.as_str()]))
            .collect(),
    );
    let body = match links {
        Some(l) => Formula::implies(l, head),
        None => head,
    };
    let formula = code_vars
        .iter()
        .rev()
        .fold(body, |acc, r| Formula::forall(r.clone(), acc));
    Ok(UniversalForm {
        formula,
        theta,
        code_vars,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalFormReport {
    #[serde(flatten)]
    pub form: UniversalForm,
    pub m: usize,
    /// Sets (tuples of sets) whose codes lie in the extension of `Theta_f`.
    pub theta_extension: Vec<Vec<String>>,
    pub assignments: usize,
    pub passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub relativization: String,
}

/// Check `f ↔ ∀r̄ (⋀ Cod(rᵢ, xᵢ) → Theta_f(r̄))` for every assignment of sets of
/// transitive closure below `m`, reading `Cod(r, x)` as "r satisfies WFE and
/// collapses to x" and `Theta_f` as the extension of `θ_f` among the relations
/// on `m` nodes.
pub fn check_universal_form(f: &Formula, m: usize) -> Result<UniversalFormReport> {
    let form = universal_form(f)?;
    let code = build_code_structure(m)?;
    let domain = HFDomain::tc_below(m)?;
    let vars = f.free_vars();
    let theta = Compiled::with_order(&form.theta, &code_signature(), &vars)?;
    let p = vars.len();
    let n = domain.codes().len();
    let mut extension = Vec::new();
    let mut counterexample = None;
    for i in 0..tuple_count(n, p) {
        let pos = index_tuple(n, p, i);
        let sets: Vec<HFSet> = pos
            .iter()
            .map(|&j| HFSet::from_ackermann(domain.codes()[j]))
            .collect();
        let mut env: HashMap<String, u64> = vars
            .iter()
            .cloned()
            .zip(pos.iter().map(|&j| domain.codes()[j]))
            .collect();
        let lhs = eval_in_domain(f, &domain, &mut env)?;
        // Every set in the domain has a code, so the universal statement reduces
        // to `Theta_f` at the codes' class.
        let classes = sets
            .iter()
            .map(|a| code.element_of_set(a))
            .collect::<Result<Vec<_>>>()?;
        let in_extension = theta.eval(&code.quotient, &classes);
        if in_extension {
            extension.push(sets.iter().map(|s| s.to_string()).collect());
        }
        if lhs != in_extension && counterexample.is_none() {
            counterexample = Some(Counterexample {
                assignment: vars
                    .iter()
                    .cloned()
                    .zip(sets.iter().map(|s| s.to_string()))
                    .collect(),
                sets: lhs,
                codes: in_extension,
            });
        }
    }
    Ok(UniversalFormReport {
        form,
        m,
        theta_extension: extension,
        assignments: tuple_count(n, p),
        passes: counterexample.is_none(),
        counterexample,
        relativization: relativization(m),
    })
}
