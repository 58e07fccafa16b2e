use serde::Serialize;

use crate::error::Result;
use crate::formula::{Formula, MorleyKind, Quantifier, Signature};
use crate::par;
use crate::structure::Compiled;
use crate::templates::{class_shapes, expand_shapes, var_names, Junction, Shape, TemplateBounds};
use crate::LevyClass;

use super::{ec_models, BoundedClass, EcVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullReport {
    /// Models that are existentially closed within bounds (boundary models excluded).
    pub survivors: Vec<usize>,
    #[serde(serialize_with = "crate::formula::morley::ser_formulas")]
    pub sentences: Vec<Formula>,
    /// Number of Π₂ templates examined.
    pub templates: usize,
}

/// `∀^a ∃^b` sentence shapes with `1 ≤ a ≤ max_vars` and `1 ≤ b ≤ qrank`.
pub fn pi2_sentence_shapes(qrank: usize, max_vars: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    for a in 1..=max_vars {
        for b in 1..=qrank {
            let names = var_names(a + b, &[]);
            let prefix = names
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    (
                        if i < a {
                            Quantifier::Forall
                        } else {
                            Quantifier::Exists
                        },
                        v.clone(),
                    )
                })
                .collect();
            out.push(Shape {
                params: Vec::new(),
                prefix,
                junction: Junction::Conj,
                require_params: true,
            });
        }
    }
    out
}

/// Π₂ template sentences true in every model that survives the bounded
/// existential-closedness scan and true in at least one model of the class.
pub fn kaiser_hull_pi2(
    c: &BoundedClass,
    qrank: usize,
    max_vars: usize,
    bounds: TemplateBounds,
) -> Result<HullReport> {
    let survivors: Vec<usize> = ec_models(c, qrank)?
        .into_iter()
        .filter(|r| r.verdict == EcVerdict::EcWithinBounds)
        .map(|r| r.structure)
        .collect();
    let templates = expand_shapes(&c.signature, &pi2_sentence_shapes(qrank, max_vars), bounds)?;
    let keep = par::map(&templates, |(_, f)| -> Result<bool> {
        let comp = Compiled::with_order(f, &c.signature, &[])?;
        Ok(survivors.iter().all(|&i| comp.eval(&c.models[i], &[]))
            && c.models.iter().any(|m| comp.eval(m, &[])))
    });
    let mut sentences = Vec::new();
    for ((_, f), k) in templates.iter().zip(keep) {
        if k? {
            sentences.push(f.clone());
        }
    }
    Ok(HullReport {
        survivors,
        sentences,
        templates: templates.len(),
    })
}

/// Every Σ₁ template of quantifier rank ≤ 1 with at most two parameters,
/// selected for definitional expansion.
pub fn rank_one_selection(
    sig: &Signature,
    bounds: TemplateBounds,
) -> Result<Vec<(Formula, MorleyKind)>> {
    Ok(
        expand_shapes(sig, &class_shapes(LevyClass::Sigma(1), 2, 1), bounds)?
            .into_iter()
            .map(|(_, f)| (f, MorleyKind::Relation))
            .collect(),
    )
}
