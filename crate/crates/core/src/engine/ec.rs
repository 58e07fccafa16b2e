//! Existential closedness inside a bounded class.
//!
//! For an embedding `e: M → N` and parameters `ā` from `M`, some Σ₁ formula
//! `∃z̄ ψ(ā, z̄)` with `|z̄| = qrank` holds in `N` at `e(ā)` but fails in `M` at
//! `ā` exactly when `N` realizes an atomic type of `(e(ā), z̄)` that `M` does
//! not realize over `ā`. The check compares realized atomic types, which
//! decides every quantifier-free matrix at once; the reported witness is the
//! unrealized type shrunk greedily to a short conjunction.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature};
use crate::par;
use crate::structure::{
    enumerate_embeddings, index_tuple, satisfies, tuple_count, Compiled, Embedding, FinStructure,
};
use crate::templates::{atoms, var_names};

use super::BoundedClass;

/// Parameters drawn from the source model in existential-closedness checks.
pub const MAX_EC_PARAMS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EcVerdict {
    EcWithinBounds,
    Refuted,
    BoundaryVacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    /// Index of the extension in the class.
    pub extension: usize,
    pub embedding: Embedding,
    #[serde(serialize_with = "crate::formula::morley::ser_formula")]
    pub formula: Formula,
    /// Parameter values in the source model.
    pub params: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EcReport {
    pub structure: usize,
    pub verdict: EcVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Refutation>,
}

/// Atomic formulas over `p` parameters and `k` witnesses, compiled.
struct TypeAtoms {
    vars: Vec<String>,
    formulas: Vec<Formula>,
    compiled: Vec<Compiled>,
}

impl TypeAtoms {
    fn new(sig: &Signature, p: usize, k: usize) -> Result<Self> {
        let vars = var_names(p + k, &[]);
        let formulas: Vec<Formula> = atoms(sig, &vars)
            .into_iter()
            .filter(|a| !a.reflexive)
            .map(|a| a.formula)
            .collect();
        let compiled = formulas
            .iter()
            .map(|f| Compiled::with_order(f, sig, &vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(TypeAtoms {
            vars,
            formulas,
            compiled,
        })
    }

    fn type_of(&self, s: &FinStructure, args: &[usize]) -> Vec<bool> {
        self.compiled.iter().map(|c| c.eval(s, args)).collect()
    }

    /// Types of `(params, z̄)` in `s`, in lexicographic order of `z̄`.
    fn realized(&self, s: &FinStructure, params: &[usize], k: usize) -> Vec<Vec<bool>> {
        let mut args = params.to_vec();
        args.resize(params.len() + k, 0);
        (0..tuple_count(s.size(), k))
            .map(|i| {
                args[params.len()..].copy_from_slice(&index_tuple(s.size(), k, i));
                self.type_of(s, &args)
            })
            .collect()
    }
}

/// Shrink the literal set of `target` while keeping `∃z̄ ⋀ literals` false
/// over every type in `source`.
fn minimize(target: &[bool], source: &BTreeSet<Vec<bool>>) -> Vec<usize> {
    let mut keep: Vec<usize> = (0..target.len()).collect();
    let realized = |keep: &[usize]| {
        source
            .iter()
            .any(|t| keep.iter().all(|&i| t[i] == target[i]))
    };
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if realized(&trial) {
            i += 1;
        } else {
            keep = trial;
        }
    }
    keep
}

fn witness_formula(ta: &TypeAtoms, p: usize, target: &[bool], keep: &[usize]) -> Formula {
    let lits: Vec<Formula> = keep
        .iter()
        .map(|&i| {
            if target[i] {
                ta.formulas[i].clone()
            } else {
                Formula::not(ta.formulas[i].clone())
            }
        })
        .collect();
    let matrix = Formula::conj(lits).expect("a refuting type keeps at least one literal");
    let free = matrix.free_vars();
    ta.vars[p..]
        .iter()
        .rev()
        .filter(|v| free.contains(v))
        .fold(matrix, |acc, v| Formula::exists(v.clone(), acc))
}

/// Embedding, Σ₁ formula and parameter assignment in the source.
pub type AlongRefutation = (Embedding, Formula, Vec<(String, usize)>);

/// A Σ₁ formula with at most `MAX_EC_PARAMS` parameters and `qrank`
/// quantifiers that is true in `n` and false in `m` along some embedding, if
/// there is one. Search order: parameter count, embedding, parameter tuple,
/// witness tuple.
pub fn refute_along(
    m: &FinStructure,
    n: &FinStructure,
    qrank: usize,
) -> Result<Option<AlongRefutation>> {
    if qrank == 0 {
        return Ok(None);
    }
    let embeddings = enumerate_embeddings(m, n)?;
    for p in 0..=MAX_EC_PARAMS {
        let ta = TypeAtoms::new(m.signature(), p, qrank)?;
        for e in &embeddings {
            for j in 0..tuple_count(m.size(), p) {
                let params = index_tuple(m.size(), p, j);
                let source: BTreeSet<Vec<bool>> =
                    ta.realized(m, &params, qrank).into_iter().collect();
                let found = ta
                    .realized(n, &e.apply(&params), qrank)
                    .into_iter()
                    .find(|t| !source.contains(t));
                if let Some(target) = found {
                    let keep = minimize(&target, &source);
                    let f = witness_formula(&ta, p, &target, &keep);
                    let assignment: Vec<(String, usize)> =
                        ta.vars[..p].iter().cloned().zip(params).collect();
                    verify(m, n, e, &f, &assignment)?;
                    return Ok(Some((e.clone(), f, assignment)));
                }
            }
        }
    }
    Ok(None)
}

fn verify(
    m: &FinStructure,
    n: &FinStructure,
    e: &Embedding,
    f: &Formula,
    a: &[(String, usize)],
) -> Result<()> {
    let src: HashMap<String, usize> = a.iter().cloned().collect();
    let tgt: HashMap<String, usize> = a.iter().map(|(v, x)| (v.clone(), e.map[*x])).collect();
    if satisfies(m, f, &src)? || !satisfies(n, f, &tgt)? {
        return Err(Error::InvalidFormula(format!(
            "witness `{f}` does not re-evaluate as claimed"
        )));
    }
    Ok(())
}

/// Existential closedness of model `idx` of `c` against every larger model.
pub fn is_ec_in_class(c: &BoundedClass, idx: usize, qrank: usize) -> Result<EcReport> {
    let m = c
        .models
        .get(idx)
        .ok_or_else(|| Error::InvalidStructure(format!("class has no model {idx}")))?;
    if m.size() >= c.size {
        return Ok(EcReport {
            structure: idx,
            verdict: EcVerdict::BoundaryVacuous,
            refutation: None,
        });
    }
    for (j, n) in c.models.iter().enumerate() {
        if n.size() <= m.size() {
            continue;
        }
        if let Some((embedding, formula, params)) = refute_along(m, n, qrank)? {
            return Ok(EcReport {
                structure: idx,
                verdict: EcVerdict::Refuted,
                refutation: Some(Refutation {
                    extension: j,
                    embedding,
                    formula,
                    params,
                }),
            });
        }
    }
    Ok(EcReport {
        structure: idx,
        verdict: EcVerdict::EcWithinBounds,
        refutation: None,
    })
}

/// One report per model, in class order.
pub fn ec_models(c: &BoundedClass, qrank: usize) -> Result<Vec<EcReport>> {
    par::map_range(c.len(), |i| is_ec_in_class(c, i, qrank))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RobinsonCounterexample {
    pub source: usize,
    #[serde(flatten)]
    pub refutation: Refutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelCompletenessReport {
    pub passes: bool,
    pub models: usize,
    pub ec_within_bounds: usize,
    pub boundary_vacuous: usize,
    pub refuted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<RobinsonCounterexample>,
}

/// Bounded Robinson test: every model is existentially closed within bounds
/// or sits at the size boundary. The first refuted model is the counterexample.
pub fn check_model_complete_bounded(
    c: &BoundedClass,
    qrank: usize,
) -> Result<ModelCompletenessReport> {
    let reports = ec_models(c, qrank)?;
    let count = |v: EcVerdict| reports.iter().filter(|r| r.verdict == v).count();
    let counterexample = reports.iter().find_map(|r| {
        r.refutation
            .clone()
            .map(|refutation| RobinsonCounterexample {
                source: r.structure,
                refutation,
            })
    });
    Ok(ModelCompletenessReport {
        passes: counterexample.is_none(),
        models: reports.len(),
        ec_within_bounds: count(EcVerdict::EcWithinBounds),
        boundary_vacuous: count(EcVerdict::BoundaryVacuous),
        refuted: count(EcVerdict::Refuted),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::builtin;
    use crate::formula::print;

    #[test]
    fn point_in_two_point_graphs() {
        let c = builtin::graphs(2).unwrap();
        // Models: K1, two isolated points, K2.
        let r = is_ec_in_class(&c, 0, 1).unwrap();
        assert_eq!(r.verdict, EcVerdict::Refuted);
        let refutation = r.refutation.unwrap();
        assert_eq!(print(&refutation.formula), "(exists y (not (= x y)))");
    }

    #[test]
    fn edge_refuted_by_path() {
        let k2 = FinStructure::graph(2, &[(0, 1)]);
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        let (_, f, _) = refute_along(&k2, &p3, 1).unwrap().unwrap();
        assert!(f.quantifier_rank() <= 1);
    }

    #[test]
    fn boundary_models_are_vacuous() {
        let c = builtin::graphs(3).unwrap();
        let reports = ec_models(&c, 1).unwrap();
        for r in &reports {
            let size = c.models[r.structure].size();
            if size == 3 {
                assert_eq!(r.verdict, EcVerdict::BoundaryVacuous);
            } else {
                assert_eq!(r.verdict, EcVerdict::Refuted);
            }
        }
    }

    #[test]
    fn minimize_keeps_refutation() {
        let source: BTreeSet<Vec<bool>> =
            [vec![true, false], vec![false, true]].into_iter().collect();
        assert_eq!(minimize(&[true, true], &source), vec![0, 1]);
        assert_eq!(minimize(&[false, false], &source), vec![0, 1]);
        let one: BTreeSet<Vec<bool>> = [vec![true, true]].into_iter().collect();
        assert_eq!(minimize(&[false, true], &one), vec![0]);
    }
}
