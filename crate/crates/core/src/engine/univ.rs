use crate::error::{Error, Result};
use crate::formula::{levy_classify, Formula, LevyClass, Quantifier};
use crate::par;
use crate::structure::{index_tuple, tuple_count, Compiled};
use crate::templates::{expand_shapes, var_names, Junction, Shape, TemplateBounds};

use super::BoundedClass;

/// A universal formula with the free variables of `phi` that agrees with
/// `phi` on every model of `c` under every assignment. Candidates are
/// universal templates of rank ≤ `qrank`, searched in template order.
pub fn find_universal_equivalent(
    phi: &Formula,
    c: &BoundedClass,
    qrank: usize,
    bounds: TemplateBounds,
) -> Result<Option<Formula>> {
    phi.validate(&c.signature)?;
    if !LevyClass::Sigma(1).contains(levy_classify(phi)) {
        return Err(Error::NotSigma1(phi.to_string()));
    }
    let params = phi.free_vars();
    let shapes: Vec<Shape> = (0..=qrank)
        .filter(|&k| k > 0 || !params.is_empty())
        .map(|k| Shape {
            params: params.clone(),
            prefix: var_names(k, &params)
                .into_iter()
                .map(|v| (Quantifier::Forall, v))
                .collect(),
            junction: Junction::Disj,
            require_params: false,
        })
        .collect();
    let templates = expand_shapes(&c.signature, &shapes, bounds)?;
    let target = Compiled::with_order(phi, &c.signature, &params)?;
    // Truth table of `phi` per model, indexed by assignment rank.
    let p = params.len();
    let expected: Vec<Vec<bool>> = c
        .models
        .iter()
        .map(|m| {
            (0..tuple_count(m.size(), p))
                .map(|i| target.eval(m, &index_tuple(m.size(), p, i)))
                .collect()
        })
        .collect();
    let compiled = templates
        .iter()
        .map(|(_, f)| Compiled::with_order(f, &c.signature, &params))
        .collect::<Result<Vec<_>>>()?;
    let hit = par::find_first(compiled.len(), |t| {
        let theta = &compiled[t];
        c.models
            .iter()
            .zip(&expected)
            .all(|(m, table)| {
                table
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| theta.eval(m, &index_tuple(m.size(), p, i)) == v)
            })
            .then_some(())
    });
    Ok(hit.map(|(i, ())| templates[i].1.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::builtin;
    use crate::formula::{morleyize, parse, print, MorleyKind, Signature};

    #[test]
    fn neighbour_on_large_cliques() {
        let c = builtin::cliques(3).unwrap();
        let big = BoundedClass {
            models: c.models.iter().filter(|m| m.size() >= 2).cloned().collect(),
            ..c
        };
        let phi = parse("(exists y (E x y))", &Signature::graph()).unwrap();
        let theta = find_universal_equivalent(&phi, &big, 1, TemplateBounds::default())
            .unwrap()
            .unwrap();
        assert_eq!(print(&theta), "(= x x)");
    }

    #[test]
    fn none_over_all_graphs() {
        let c = builtin::graphs(3).unwrap();
        let phi = parse("(exists y (E x y))", &Signature::graph()).unwrap();
        assert_eq!(
            find_universal_equivalent(&phi, &c, 1, TemplateBounds::default()).unwrap(),
            None
        );
    }

    #[test]
    fn morleyized_atom() {
        let c = builtin::graphs(3).unwrap();
        let phi = parse("(exists y (E x y))", &Signature::graph()).unwrap();
        let mr = morleyize(&c.signature, &[(phi.clone(), MorleyKind::Relation)]).unwrap();
        let mc = c.morleyized(&mr).unwrap();
        let theta = find_universal_equivalent(&phi, &mc, 1, TemplateBounds::default())
            .unwrap()
            .unwrap();
        assert_eq!(print(&theta), "(R_0 x)");
    }

    #[test]
    fn rejects_non_sigma1() {
        let c = builtin::graphs(2).unwrap();
        let phi = parse("(forall y (exists z (E y z)))", &Signature::graph()).unwrap();
        assert!(matches!(
            find_universal_equivalent(&phi, &c, 1, TemplateBounds::default()),
            Err(Error::NotSigma1(_))
        ));
    }
}
