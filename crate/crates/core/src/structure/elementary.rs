use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, LevyClass};
use crate::par;
use crate::templates::{class_shapes, expand_shapes, TemplateBounds};

use super::{index_tuple, is_embedding, tuple_count, Compiled, Embedding, FinStructure};

/// Parameters drawn from the source structure in elementarity checks.
pub const MAX_PARAMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ElementarityReport {
    /// A template whose truth value differs between source and target.
    Refuted {
        #[serde(serialize_with = "crate::formula::morley::ser_formula")]
        formula: Formula,
        /// Parameter values in the source structure.
        assignment: Vec<(String, usize)>,
        in_source: bool,
        in_target: bool,
    },
    NotRefutedUpToBound {
        templates: usize,
    },
}

impl ElementarityReport {
    pub fn holds(&self) -> bool {
        matches!(self, ElementarityReport::NotRefutedUpToBound { .. })
    }
}

/// Check that every template of `level` with quantifier rank ≤ `qrank` and at
/// most three parameters has the same truth value at `ā` in `m` and at `e(ā)`
/// in `n`. The first mismatching template, in template order, is reported.
pub fn is_elementary_up_to(
    m: &FinStructure,
    n: &FinStructure,
    e: &Embedding,
    level: LevyClass,
    qrank: usize,
    bounds: TemplateBounds,
) -> Result<ElementarityReport> {
    if !is_embedding(m, n, &e.map)? {
        return Err(Error::InvalidStructure("map is not an embedding".into()));
    }
    let shapes = class_shapes(level, MAX_PARAMS, qrank);
    let templates = expand_shapes(m.signature(), &shapes, bounds)?;
    let compiled = templates
        .iter()
        .map(|(s, f)| {
            Ok((
                s,
                Compiled::with_order(f, m.signature(), &shapes[*s].params)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let hit = par::find_first(compiled.len(), |i| {
        let (_, c) = &compiled[i];
        let p = c.free_vars().len();
        (0..tuple_count(m.size(), p)).find_map(|j| {
            let args = index_tuple(m.size(), p, j);
            let a = c.eval(m, &args);
            let b = c.eval(n, &e.apply(&args));
            (a != b).then_some((args, a, b))
        })
    });
    Ok(match hit {
        Some((i, (args, a, b))) => {
            let (_, f) = &templates[i];
            ElementarityReport::Refuted {
                formula: f.clone(),
                assignment: compiled[i]
                    .1
                    .free_vars()
                    .iter()
                    .cloned()
                    .zip(args)
                    .collect(),
                in_source: a,
                in_target: b,
            }
        }
        None => ElementarityReport::NotRefutedUpToBound {
            templates: templates.len(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::satisfies;
    use std::collections::HashMap;

    #[test]
    fn identity_is_elementary() {
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        let r = is_elementary_up_to(
            &p3,
            &p3,
            &Embedding::identity(3),
            LevyClass::Sigma(2),
            2,
            TemplateBounds::default(),
        )
        .unwrap();
        assert!(r.holds());
    }

    #[test]
    fn edge_into_path_is_refuted_with_valid_witness() {
        let k2 = FinStructure::graph(2, &[(0, 1)]);
        let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
        let e = Embedding { map: vec![0, 1] };
        let r = is_elementary_up_to(
            &k2,
            &p3,
            &e,
            LevyClass::Sigma(1),
            1,
            TemplateBounds::default(),
        )
        .unwrap();
        let ElementarityReport::Refuted {
            formula,
            assignment,
            in_source,
            in_target,
        } = r
        else {
            panic!("expected refutation")
        };
        let a: HashMap<String, usize> = assignment.iter().cloned().collect();
        let b: HashMap<String, usize> = assignment
            .iter()
            .map(|(v, x)| (v.clone(), e.map[*x]))
            .collect();
        assert_eq!(satisfies(&k2, &formula, &a).unwrap(), in_source);
        assert_eq!(satisfies(&p3, &formula, &b).unwrap(), in_target);
        assert_ne!(in_source, in_target);
    }

    #[test]
    fn point_into_two_points() {
        let k1 = FinStructure::graph(1, &[]);
        let two = FinStructure::graph(2, &[]);
        let e = Embedding { map: vec![0] };
        let r = is_elementary_up_to(
            &k1,
            &two,
            &e,
            LevyClass::Sigma(1),
            1,
            TemplateBounds::default(),
        )
        .unwrap();
        assert!(!r.holds());
    }
}
