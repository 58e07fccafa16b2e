use crate::error::Result;
use crate::formula::{parse, Formula, Signature};

use super::GuardMutation;

/// A membership-language formula with the node count at which its
/// translation is verified.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub m: usize,
    /// Free variables range over `HF(level)` instead of all sets below `m`.
    pub level: Option<usize>,
}

impl CorpusEntry {
    pub fn formula(&self) -> Result<Formula> {
        parse(self.source, &Signature::membership_only())
    }
}

pub const KURATOWSKI_PAIR: &str =
    "(exists t (exists u (and (forall w (iff (in w x) (or (= w t) (= w u)))) \
     (and (forall v (iff (in v t) (= v y))) (forall v (iff (in v u) (or (= v y) (= v z))))))))";

const TRANSITIVE: &str = "(forall-in w x (forall-in v w (in v x)))";

pub fn corpus() -> Vec<CorpusEntry> {
    let e = |name, source, m, level| CorpusEntry {
        name,
        source,
        m,
        level,
    };
    vec![
        e("subset", "(forall-in w x (in w y))", 3, None),
        e("transitive", TRANSITIVE, 4, None),
        e(
            "ordinal",
            "(and (forall-in w x (forall-in v w (in v x))) \
             (forall-in u x (forall-in v x (or (in u v) (or (= u v) (in v u))))))",
            4,
            None,
        ),
        e("kuratowski-pair", KURATOWSKI_PAIR, 5, Some(3)),
        e(
            "union",
            "(and (forall-in w x (exists-in v y (in w v))) (forall-in v y (forall-in w v (in w x))))",
            4,
            None,
        ),
        e("singleton", "(exists y (forall w (iff (in w x) (= w y))))", 4, None),
        e("is-singleton-of", "(forall w (iff (in w x) (= w y)))", 4, None),
        e("empty", "(forall y (not (in y x)))", 4, None),
        e(
            "in-minimal",
            "(or (forall w (not (in w x))) (exists-in y x (forall-in w y (not (in w x)))))",
            4,
            None,
        ),
        e("pair-equality", "(forall w (iff (in w x) (or (= w y) (= w z))))", 4, None),
        e("successor", "(forall w (iff (in w x) (or (in w y) (= w y))))", 4, None),
        e("member-chain", "(and (in x y) (in y z))", 3, None),
    ]
}

/// A translation with a guard removed that must fail verification.
#[derive(Debug, Clone)]
pub struct MutationCase {
    pub name: &'static str,
    pub source: &'static str,
    pub m: usize,
    pub mutation: GuardMutation,
}

/// Formulas that detect a missing quantifier guard: the unguarded quantifier
/// can pick a relation that codes nothing and satisfies no atom.
pub fn guard_mutation_cases() -> Vec<MutationCase> {
    vec![
        MutationCase {
            name: "singleton without exists guard",
            source: "(exists y (forall w (iff (in w x) (= w y))))",
            m: 3,
            mutation: GuardMutation::DropExistsGuard,
        },
        MutationCase {
            name: "unordered pair without exists guard",
            source: "(exists y (exists z (forall w (iff (in w x) (or (= w y) (= w z))))))",
            m: 3,
            mutation: GuardMutation::DropExistsGuard,
        },
        MutationCase {
            name: "self-equality without forall guard",
            source: "(forall y (exists z (= z y)))",
            m: 3,
            mutation: GuardMutation::DropForallGuard,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{levy_classify, LevyClass};

    #[test]
    fn corpus_parses() {
        let c = corpus();
        assert_eq!(c.len(), 12);
        for e in &c {
            e.formula().unwrap();
        }
    }

    #[test]
    fn kuratowski_is_sigma2() {
        let f = parse(KURATOWSKI_PAIR, &Signature::membership_only()).unwrap();
        assert_eq!(levy_classify(&f), LevyClass::Sigma(2));
    }
}
