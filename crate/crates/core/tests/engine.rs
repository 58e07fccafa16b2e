mod common;

use std::collections::BTreeSet;

use common::{naive, naive_sentence, tuples, Env};
use modelcomp::engine::{
    builtin, check_model_complete_bounded, ec_models, find_universal_equivalent, kaiser_hull_pi2,
    pi1_separator, refute_along, BoundedClass, EcVerdict, SeparationReport,
};
use modelcomp::formula::{parse, print, Formula, Signature};
use modelcomp::par::with_jobs;
use modelcomp::templates::TemplateBounds;
use modelcomp::FinStructure;

fn bounds() -> TemplateBounds {
    TemplateBounds::default()
}

fn refuted(c: &BoundedClass, qrank: usize) -> BTreeSet<usize> {
    ec_models(c, qrank)
        .unwrap()
        .into_iter()
        .filter(|r| r.verdict == EcVerdict::Refuted)
        .map(|r| r.structure)
        .collect()
}

/// Check a Σ₁ refutation of `m ⊑ n` against the reference evaluator.
fn refutation_holds(
    m: &FinStructure,
    n: &FinStructure,
    map: &[usize],
    f: &Formula,
    params: &[(String, usize)],
) -> bool {
    let mut src: Env = params.iter().cloned().collect();
    let mut tgt: Env = params.iter().map(|(v, a)| (v.clone(), map[*a])).collect();
    let preserves = m.signature().relations().iter().enumerate().all(|(r, s)| {
        tuples(m.size(), s.arity)
            .iter()
            .all(|t| m.holds(r, t) == n.holds(r, &t.iter().map(|&x| map[x]).collect::<Vec<_>>()))
    });
    preserves && !naive(m, f, &mut src) && naive(n, f, &mut tgt)
}

fn classes() -> Vec<BoundedClass> {
    vec![
        builtin::graphs(3).unwrap(),
        builtin::equality(3).unwrap(),
        builtin::linear_orders(3).unwrap(),
        builtin::triangle_free(4).unwrap(),
    ]
}

#[test]
fn every_refutation_re_evaluates() {
    for c in classes() {
        for qrank in 1..=2 {
            for r in ec_models(&c, qrank).unwrap() {
                if let Some(x) = r.refutation {
                    let ok = refutation_holds(
                        &c.models[r.structure],
                        &c.models[x.extension],
                        &x.embedding.map,
                        &x.formula,
                        &x.params,
                    );
                    assert!(ok, "{}", print(&x.formula));
                    assert!(x.formula.quantifier_rank() <= qrank);
                }
            }
        }
    }
}

#[test]
fn larger_rank_never_shrinks_refutations() {
    for c in classes() {
        assert!(refuted(&c, 1).is_subset(&refuted(&c, 2)));
    }
}

#[test]
fn only_boundary_graphs_survive() {
    let c = builtin::graphs(3).unwrap();
    for r in ec_models(&c, 1).unwrap() {
        assert_eq!(
            r.verdict != EcVerdict::Refuted,
            c.models[r.structure].size() == 3
        );
    }
    let empty =
        BoundedClass::from_text(&Signature::graph(), &["(exists x (not (= x x)))"], 3).unwrap();
    assert!(ec_models(&empty, 1).unwrap().is_empty());
}

#[test]
fn edge_inside_path_is_refuted() {
    let k2 = FinStructure::graph(2, &[(0, 1)]);
    let p3 = FinStructure::graph(3, &[(0, 1), (1, 2)]);
    let (e, f, params) = refute_along(&k2, &p3, 1)
        .unwrap()
        .expect("K2 is not existentially closed in P3");
    assert!(refutation_holds(&k2, &p3, &e.map, &f, &params));
}

#[test]
fn pure_equality_counterexample() {
    let c = builtin::equality(2).unwrap();
    let r = check_model_complete_bounded(&c, 1).unwrap();
    assert!(!r.passes);
    let cx = r.counterexample.unwrap();
    assert_eq!(
        (
            c.models[cx.source].size(),
            c.models[cx.refutation.extension].size()
        ),
        (1, 2)
    );
    // Same formula as "there is something other than x", up to the order of the equation.
    let expected = parse("(exists y (not (= y x)))", &Signature::empty()).unwrap();
    for m in &c.models {
        for a in 0..m.size() {
            let env: Env = [("x".to_string(), a)].into();
            assert_eq!(
                naive(m, &cx.refutation.formula, &mut env.clone()),
                naive(m, &expected, &mut env.clone())
            );
        }
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    for c in classes() {
        let one = with_jobs(1, || {
            serde_json::to_string(&ec_models(&c, 2).unwrap()).unwrap()
        });
        let many = with_jobs(4, || {
            serde_json::to_string(&ec_models(&c, 2).unwrap()).unwrap()
        });
        assert_eq!(one, many);
    }
}

#[test]
fn hull_depends_only_on_the_models() {
    let a = builtin::graphs(4).unwrap();
    let b = a
        .restrict(&[parse(
            "(forall x (forall y (or (E x y) (not (E y x)))))",
            &a.signature,
        )
        .unwrap()])
        .unwrap();
    assert_eq!(a.models, b.models);
    assert_ne!(a.axioms, b.axioms);
    assert_eq!(
        kaiser_hull_pi2(&a, 1, 2, bounds()).unwrap(),
        kaiser_hull_pi2(&b, 1, 2, bounds()).unwrap()
    );
}

#[test]
fn hull_sentences_are_consistent_with_the_class() {
    for c in [
        builtin::graphs(3).unwrap(),
        builtin::linear_orders(3).unwrap(),
    ] {
        let hull = kaiser_hull_pi2(&c, 1, 2, bounds()).unwrap();
        for psi in &hull.sentences {
            for &i in &hull.survivors {
                assert!(naive_sentence(&c.models[i], psi));
            }
            let models_of_psi = c.restrict(std::slice::from_ref(psi)).unwrap();
            assert!(!models_of_psi.is_empty());
            let r = pi1_separator(&c, &models_of_psi, 1, 2, bounds()).unwrap();
            assert!(
                matches!(r, SeparationReport::NoneWithEmbedding { .. }),
                "{} separated: {r:?}",
                print(psi)
            );
        }
    }
}

#[test]
fn hull_excludes_contradictions() {
    let c = builtin::graphs(5).unwrap();
    let hull = kaiser_hull_pi2(&c, 1, 2, bounds()).unwrap();
    let printed: Vec<String> = hull.sentences.iter().map(print).collect();
    assert!(!printed.contains(&"(forall x (exists y (and (E x y) (not (E x y)))))".to_string()));
    assert!(printed.contains(&"(forall x (exists y (E x y)))".to_string()));
}

#[test]
fn separators_separate() {
    let pairs = [
        (builtin::cliques(3).unwrap(), builtin::non_edge(3).unwrap()),
        (
            builtin::linear_orders(3).unwrap(),
            builtin::equality(3).unwrap(),
        ),
    ];
    for (t, s) in pairs {
        if t.signature != s.signature {
            assert!(pi1_separator(&t, &s, 2, 2, bounds()).is_err());
            continue;
        }
        let SeparationReport::Separator { sentence } =
            pi1_separator(&t, &s, 2, 2, bounds()).unwrap()
        else {
            panic!("expected a separator");
        };
        assert!(t.models.iter().all(|m| naive_sentence(m, &sentence)));
        assert!(s.models.iter().all(|m| !naive_sentence(m, &sentence)));
    }
}

#[test]
fn universal_equivalents_agree_everywhere() {
    let sig = Signature::graph();
    let phi = parse("(exists y (E x y))", &sig).unwrap();
    let cliques = builtin::cliques(3)
        .unwrap()
        .restrict(&[parse("(exists x (exists y (not (= x y))))", &sig).unwrap()])
        .unwrap();
    let theta = find_universal_equivalent(&phi, &cliques, 1, bounds())
        .unwrap()
        .expect("equivalent exists");
    for m in &cliques.models {
        for a in 0..m.size() {
            let env: Env = [("x".to_string(), a)].into();
            assert_eq!(
                naive(m, &phi, &mut env.clone()),
                naive(m, &theta, &mut env.clone())
            );
        }
    }
    assert_eq!(
        find_universal_equivalent(&phi, &builtin::graphs(3).unwrap(), 1, bounds()).unwrap(),
        None
    );
}
