mod common;

use std::collections::BTreeSet;

use common::{membership_formula, tuples};
use modelcomp::formula::{Formula, Term};
use modelcomp::hf::{
    ackermann, ackermann_decode, collapse, encode, graph_mem, graph_mem_iso, graphs_equal,
    graphs_equal_iso, hf_eval, hf_universe, is_wfe, universe_size, valid_codes, HFSet, PointedCode,
};
use proptest::prelude::*;

fn set(s: &str) -> HFSet {
    s.parse().unwrap()
}

/// Every relation on `d` nodes, as pair lists in mask order.
fn relations(d: usize) -> Vec<PointedCode> {
    let pairs = tuples(d, 2);
    (0..1u64 << pairs.len())
        .map(|mask| {
            let rel = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| (p[0], p[1]))
                .collect();
            PointedCode::new(d, rel)
        })
        .collect()
}

/// The code invariant read off its definition: acyclic, nothing above the
/// top, every node reaches the top, distinct nodes have distinct members.
fn reference_wfe(c: &PointedCode) -> bool {
    let d = c.domain;
    let mut reach = vec![vec![false; d]; d];
    for &(u, v) in &c.rel {
        reach[u][v] = true;
    }
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    let acyclic = (0..d).all(|i| !reach[i][i]);
    let top = c.rel.iter().all(|&(u, _)| u != 0);
    let reaches = (1..d).all(|i| reach[i][0]);
    let members =
        |v: usize| -> BTreeSet<usize> { c.rel.iter().filter(|p| p.1 == v).map(|p| p.0).collect() };
    let extensional = (0..d).all(|i| (i + 1..d).all(|j| members(i) != members(j)));
    acyclic && top && reaches && extensional
}

/// Collapse straight from the recursive definition.
fn reference_collapse(c: &PointedCode, v: usize) -> HFSet {
    HFSet::new(
        c.rel
            .iter()
            .filter(|p| p.1 == v)
            .map(|p| reference_collapse(c, p.0))
            .collect(),
    )
}

#[test]
fn small_ackermann_values() {
    for (s, n) in [
        ("{}", 0),
        ("{{}}", 1),
        ("{{{}}}", 2),
        ("{{},{{}}}", 3),
        ("{{{{}}}}", 4),
    ] {
        assert_eq!(ackermann(&set(s)).unwrap(), n);
        assert_eq!(ackermann_decode(n), set(s));
    }
}

#[test]
fn ackermann_is_a_bijection_on_the_first_codes() {
    for n in 0..1u64 << 16 {
        let a = ackermann_decode(n);
        assert_eq!(ackermann(&a).unwrap(), n);
        // The definition: the code is the sum of 2^code over the members.
        let sum: u64 = a
            .elements()
            .iter()
            .map(|b| 1u64 << ackermann(b).unwrap())
            .sum();
        assert_eq!(sum, n);
    }
}

#[test]
fn levels_have_tower_sizes() {
    let expected = [1u64, 2, 4, 16, 65536];
    for (k, &n) in expected.iter().enumerate() {
        assert_eq!(universe_size(k + 1).unwrap(), n);
        assert_eq!(hf_universe(k + 1).unwrap().len() as u64, n);
    }
    assert!(universe_size(6).is_err());
}

#[test]
fn order_matches_codes() {
    let u = hf_universe(4).unwrap();
    for a in &u {
        for b in &u {
            assert_eq!(a.cmp(b), ackermann(a).unwrap().cmp(&ackermann(b).unwrap()));
        }
    }
}

#[test]
fn wfe_matches_definition_on_three_nodes() {
    let mut valid = 0;
    for d in 1..=3 {
        for c in relations(d) {
            let r = reference_wfe(&c);
            assert_eq!(is_wfe(&c).valid, r, "{c:?}");
            if r {
                valid += 1;
                assert_eq!(collapse(&c).unwrap(), reference_collapse(&c, 0));
            } else {
                assert!(collapse(&c).is_err());
            }
        }
    }
    assert_eq!(valid, valid_codes(3).unwrap().len());
}

#[test]
fn collapse_matches_definition_on_four_nodes() {
    let mut valid = 0;
    for c in relations(4) {
        if reference_wfe(&c) {
            valid += 1;
            assert_eq!(collapse(&c).unwrap(), reference_collapse(&c, 0));
        } else {
            assert!(!is_wfe(&c).valid);
        }
    }
    assert_eq!(
        valid,
        valid_codes(4).unwrap().len() - valid_codes(3).unwrap().len()
    );
}

#[test]
fn code_json_round_trip() {
    let c = encode(&set("{{},{{}}}"));
    assert_eq!(PointedCode::from_json(&c.to_json()).unwrap(), c);
    assert_eq!(c.to_json(), r#"{"domain":3,"rel":[[1,0],[2,0],[1,2]]}"#);
}

#[test]
fn invalid_codes_name_their_defect() {
    let cycle = PointedCode::new(2, vec![(1, 1)]);
    assert!(is_wfe(&cycle).reason.unwrap().starts_with("cycle"));
    let twins = PointedCode::new(3, vec![(1, 0), (2, 0)]);
    assert!(is_wfe(&twins).reason.unwrap().starts_with("extensionality"));
    let orphan = PointedCode::new(2, vec![]);
    assert!(is_wfe(&orphan).reason.unwrap().starts_with("reachability"));
}

fn reference_eval(f: &Formula, u: &[HFSet], env: &mut Vec<(String, HFSet)>) -> bool {
    let look = |env: &Vec<(String, HFSet)>, t: &Term| -> HFSet {
        let Term::Var(v) = t else { unreachable!() };
        env.iter().rev().find(|(n, _)| n == v).unwrap().1.clone()
    };
    let bind = |v: &str, a: &HFSet, g: &Formula, env: &mut Vec<(String, HFSet)>| {
        env.push((v.to_string(), a.clone()));
        let r = reference_eval(g, u, env);
        env.pop();
        r
    };
    match f {
        Formula::Equal(a, b) => look(env, a) == look(env, b),
        Formula::Member(a, b) => look(env, b).contains(&look(env, a)),
        Formula::Not(g) => !reference_eval(g, u, env),
        Formula::And(a, b) => reference_eval(a, u, env) && reference_eval(b, u, env),
        Formula::Or(a, b) => reference_eval(a, u, env) || reference_eval(b, u, env),
        Formula::Implies(a, b) => !reference_eval(a, u, env) || reference_eval(b, u, env),
        Formula::Iff(a, b) => reference_eval(a, u, env) == reference_eval(b, u, env),
        Formula::Forall(v, g) => u.iter().all(|a| bind(v, a, g, env)),
        Formula::Exists(v, g) => u.iter().any(|a| bind(v, a, g, env)),
        Formula::BoundedForall(v, t, g) => look(env, t)
            .elements()
            .to_vec()
            .iter()
            .all(|a| bind(v, a, g, env)),
        Formula::BoundedExists(v, t, g) => look(env, t)
            .elements()
            .to_vec()
            .iter()
            .any(|a| bind(v, a, g, env)),
        Formula::Atom(..) => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encode_collapse_round_trip(n in 0u64..65536) {
        let a = ackermann_decode(n);
        let c = encode(&a);
        prop_assert!(is_wfe(&c).valid);
        prop_assert_eq!(c.domain, a.tc_size() + 1);
        prop_assert_eq!(collapse(&c).unwrap(), a);
    }

    #[test]
    fn canonical_and_search_paths_agree(a in 0u64..4096, b in 0u64..4096) {
        let (x, y) = (ackermann_decode(a), ackermann_decode(b));
        let (cx, cy) = (encode(&x), encode(&y));
        prop_assert_eq!(graphs_equal(&cx, &cy).unwrap(), x == y);
        prop_assert_eq!(graphs_equal_iso(&cx, &cy).unwrap(), x == y);
        prop_assert_eq!(graph_mem(&cx, &cy).unwrap(), y.contains(&x));
        prop_assert_eq!(graph_mem_iso(&cx, &cy).unwrap(), y.contains(&x));
    }

    #[test]
    fn hf_eval_matches_reference(f in membership_formula(), vals in prop::array::uniform3(0usize..16)) {
        let u = hf_universe(4).unwrap();
        let assignment: Vec<(String, HFSet)> =
            common::VARS.iter().zip(vals).map(|(v, i)| (v.to_string(), u[i].clone())).collect();
        let expected = reference_eval(&f, &u, &mut assignment.clone());
        let map = assignment.into_iter().collect();
        prop_assert_eq!(hf_eval(&f, 4, &map).unwrap(), expected);
    }
}
