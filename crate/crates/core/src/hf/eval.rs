use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};

use super::{universe_size, HFSet};

/// A finite universe of hereditarily finite sets, each named by its
/// Ackermann code. Membership is a bit test.
#[derive(Debug, Clone)]
pub struct HFDomain {
    codes: Vec<u64>,
}

#[inline]
pub(crate) fn member(a: u64, b: u64) -> bool {
    a < 64 && b >> a & 1 == 1
}

impl HFDomain {
    /// `HF(k)`.
    pub fn level(k: usize) -> Result<Self> {
        Ok(HFDomain {
            codes: (0..universe_size(k)?).collect(),
        })
    }

    /// Sets whose transitive closure has fewer than `m` elements.
    pub fn tc_below(m: usize) -> Result<Self> {
        if m > 5 {
            return Err(Error::CostGuard(format!(
                "transitive-closure bound {m} above 5"
            )));
        }
        // |TC(a)| < m forces rank < m, so HF(m) contains every such set.
        let codes = (0..universe_size(m)?)
            .filter(|&c| HFSet::from_ackermann(c).tc_size() < m)
            .collect();
        Ok(HFDomain { codes })
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    pub fn sets(&self) -> Vec<HFSet> {
        self.codes
            .iter()
            .map(|&c| HFSet::from_ackermann(c))
            .collect()
    }
}

/// Truth of a membership-language formula with quantifiers over `domain`.
/// `in` atoms, `=` and bounded quantifiers are interpreted by true membership.
pub fn eval_in_domain(
    f: &Formula,
    domain: &HFDomain,
    env: &mut HashMap<String, u64>,
) -> Result<bool> {
    let term = |t: &Term, env: &HashMap<String, u64>| -> Result<u64> {
        match t {
            Term::Var(v) => env
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnassignedVariable(v.clone())),
            Term::App(name, _) => Err(Error::Unsupported(format!(
                "function symbol `{name}` in a set formula"
            ))),
        }
    };
    Ok(match f {
        Formula::Member(a, b) => member(term(a, env)?, term(b, env)?),
        Formula::Atom(name, args) if args.len() == 2 && name == "in" => {
            member(term(&args[0], env)?, term(&args[1], env)?)
        }
        Formula::Atom(name, _) => {
            return Err(Error::Unsupported(format!(
                "relation `{name}` in a set formula"
            )))
        }
        Formula::Equal(a, b) => term(a, env)? == term(b, env)?,
        Formula::Not(a) => !eval_in_domain(a, domain, env)?,
        Formula::And(a, b) => eval_in_domain(a, domain, env)? && eval_in_domain(b, domain, env)?,
        Formula::Or(a, b) => eval_in_domain(a, domain, env)? || eval_in_domain(b, domain, env)?,
        Formula::Implies(a, b) => {
            !eval_in_domain(a, domain, env)? || eval_in_domain(b, domain, env)?
        }
        Formula::Iff(a, b) => eval_in_domain(a, domain, env)? == eval_in_domain(b, domain, env)?,
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            quantify(
                v,
                domain.codes.iter().copied(),
                universal,
                body,
                domain,
                env,
            )?
        }
        Formula::BoundedForall(v, t, body) | Formula::BoundedExists(v, t, body) => {
            let universal = matches!(f, Formula::BoundedForall(..));
            let bound = term(t, env)?;
            let members: Vec<u64> = (0..64).filter(|&a| member(a, bound)).collect();
            quantify(v, members.into_iter(), universal, body, domain, env)?
        }
    })
}

fn quantify(
    v: &str,
    range: impl Iterator<Item = u64>,
    universal: bool,
    body: &Formula,
    domain: &HFDomain,
    env: &mut HashMap<String, u64>,
) -> Result<bool> {
    let saved = env.get(v).copied();
    let mut result = universal;
    for a in range {
        env.insert(v.to_string(), a);
        if eval_in_domain(body, domain, env)? != universal {
            result = !universal;
            break;
        }
    }
    match saved {
        Some(x) => env.insert(v.to_string(), x),
        None => env.remove(v),
    };
    Ok(result)
}

/// Truth of `f` with quantifiers over `HF(k)` and free variables assigned
/// from `a`, whose values must lie in `HF(k)`.
pub fn hf_eval(f: &Formula, k: usize, a: &HashMap<String, HFSet>) -> Result<bool> {
    let domain = HFDomain::level(k)?;
    let mut env = HashMap::new();
    for v in f.free_vars() {
        let set = a
            .get(&v)
            .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
        let code = set.ackermann()?;
        if !domain.contains(code) {
            return Err(Error::BoundMismatch(format!(
                "`{v}` = {set} is not in HF({k})"
            )));
        }
        env.insert(v, code);
    }
    eval_in_domain(f, &domain, &mut env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_inferring;

    fn check(src: &str, x: &str, k: usize) -> bool {
        let (f, _) = parse_inferring(src).unwrap();
        let a = HashMap::from([("x".to_string(), x.parse::<HFSet>().unwrap())]);
        hf_eval(&f, k, &a).unwrap()
    }

    const TRANSITIVE: &str = "(forall-in w x (forall-in v w (in v x)))";

    #[test]
    fn transitivity() {
        assert!(check(TRANSITIVE, "{}", 3));
        assert!(!check(TRANSITIVE, "{{{}}}", 3));
    }

    #[test]
    fn ordinal() {
        let ord = format!("(and {TRANSITIVE} (forall-in u x (forall-in v x (or (in u v) (or (= u v) (in v u))))))");
        assert!(check(&ord, "{{},{{}}}", 4));
        assert!(!check(&ord, "{{{}}}", 4));
    }

    #[test]
    fn unbounded_quantifiers_range_over_level() {
        // HF(2) = {∅, {∅}}: every set has at most one element there.
        assert!(check("(exists y (in y x))", "{{}}", 2));
        assert!(!check("(exists y (in y x))", "{}", 2));
    }

    #[test]
    fn tc_domain_sizes() {
        let sizes: Vec<usize> = (1..=4)
            .map(|m| HFDomain::tc_below(m).unwrap().codes().len())
            .collect();
        assert_eq!(sizes[0], 1);
        assert_eq!(sizes[1], 2);
        assert_eq!(sizes[2], 4);
    }

    #[test]
    fn out_of_level_assignment() {
        let (f, _) = parse_inferring("(in x x)").unwrap();
        let a = HashMap::from([("x".to_string(), "{{{}}}".parse::<HFSet>().unwrap())]);
        assert!(matches!(hf_eval(&f, 2, &a), Err(Error::BoundMismatch(_))));
    }
}
