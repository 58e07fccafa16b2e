use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier};
use crate::par;
use crate::structure::{first_embedding, Compiled, Embedding};
use crate::templates::{expand_shapes, var_names, Junction, Shape, TemplateBounds};

use super::BoundedClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum SeparationReport {
    /// A universal sentence true in every model of the first class and false
    /// in every model of the second.
    Separator {
        #[serde(serialize_with = "crate::formula::morley::ser_formula")]
        sentence: Formula,
    },
    /// No separator within bounds, and a model of the second class embeds in
    /// a model of the first, so none can exist.
    NoneWithEmbedding {
        source: usize,
        target: usize,
        embedding: Embedding,
    },
    NoneWithinBounds {
        checked: usize,
    },
    /// The template cap was reached before the search finished.
    Unknown {
        cap: usize,
    },
}

/// Universal sentence templates `∀v₁…v_k` with `1 ≤ k ≤ min(qrank, max_vars)`.
pub fn universal_sentence_shapes(qrank: usize, max_vars: usize) -> Vec<Shape> {
    (1..=qrank.min(max_vars))
        .map(|k| Shape {
            params: Vec::new(),
            prefix: var_names(k, &[])
                .into_iter()
                .map(|v| (Quantifier::Forall, v))
                .collect(),
            junction: Junction::Disj,
            require_params: true,
        })
        .collect()
}

/// Search for a universal sentence separating `t` from `s`: provable in the
/// theory of `t`, refutable in the theory of `s`.
pub fn pi1_separator(
    t: &BoundedClass,
    s: &BoundedClass,
    qrank: usize,
    max_vars: usize,
    bounds: TemplateBounds,
) -> Result<SeparationReport> {
    if t.signature != s.signature {
        return Err(Error::SignatureMismatch(
            "separated classes must share a signature".into(),
        ));
    }
    let templates = match expand_shapes(
        &t.signature,
        &universal_sentence_shapes(qrank, max_vars),
        bounds,
    ) {
        Ok(ts) => ts,
        Err(Error::TemplateCap { cap }) => return Ok(SeparationReport::Unknown { cap }),
        Err(e) => return Err(e),
    };
    let compiled = templates
        .iter()
        .map(|(_, f)| Compiled::with_order(f, &t.signature, &[]))
        .collect::<Result<Vec<_>>>()?;
    let hit = par::find_first(compiled.len(), |i| {
        let c = &compiled[i];
        (t.models.iter().all(|m| c.eval(m, &[])) && s.models.iter().all(|m| !c.eval(m, &[])))
            .then_some(())
    });
    if let Some((i, ())) = hit {
        return Ok(SeparationReport::Separator {
            sentence: templates[i].1.clone(),
        });
    }
    for (si, sm) in s.models.iter().enumerate() {
        for (ti, tm) in t.models.iter().enumerate() {
            if let Some(e) = first_embedding(sm, tm)? {
                return Ok(SeparationReport::NoneWithEmbedding {
                    source: si,
                    target: ti,
                    embedding: e,
                });
            }
        }
    }
    Ok(SeparationReport::NoneWithinBounds {
        checked: templates.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::builtin;
    use crate::formula::print;

    #[test]
    fn cliques_against_non_edge() {
        let r = pi1_separator(
            &builtin::cliques(3).unwrap(),
            &builtin::non_edge(3).unwrap(),
            2,
            2,
            TemplateBounds::default(),
        )
        .unwrap();
        let SeparationReport::Separator { sentence } = r else {
            panic!("{r:?}")
        };
        assert_eq!(
            print(&sentence),
            "(forall x (forall y (or (= x y) (E x y))))"
        );
    }

    #[test]
    fn cliques_against_triangle_free() {
        let r = pi1_separator(
            &builtin::cliques(3).unwrap(),
            &builtin::triangle_free(3).unwrap(),
            2,
            2,
            TemplateBounds::default(),
        )
        .unwrap();
        assert_eq!(
            r,
            SeparationReport::NoneWithEmbedding {
                source: 0,
                target: 0,
                embedding: Embedding { map: vec![0] }
            }
        );
    }

    #[test]
    fn class_against_itself() {
        let g = builtin::graphs(3).unwrap();
        let r = pi1_separator(&g, &g, 2, 2, TemplateBounds::default()).unwrap();
        assert!(matches!(r, SeparationReport::NoneWithEmbedding { .. }));
    }

    #[test]
    fn cap_reports_unknown() {
        let g = builtin::graphs(3).unwrap();
        let r = pi1_separator(
            &g,
            &g,
            2,
            2,
            TemplateBounds {
                max_literals: 2,
                cap: 3,
            },
        )
        .unwrap();
        assert_eq!(r, SeparationReport::Unknown { cap: 3 });
    }
}
