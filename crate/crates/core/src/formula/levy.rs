use std::fmt;

use serde::{Serialize, Serializer};

use crate::formula::{prenex_parts, Formula, Quantifier};

/// Position in the Levy hierarchy. `Sigma(0)` and `Pi(0)` never occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevyClass {
    Delta0,
    Sigma(usize),
    Pi(usize),
}

impl LevyClass {
    pub fn sigma(n: usize) -> Self {
        if n == 0 {
            LevyClass::Delta0
        } else {
            LevyClass::Sigma(n)
        }
    }

    pub fn pi(n: usize) -> Self {
        if n == 0 {
            LevyClass::Delta0
        } else {
            LevyClass::Pi(n)
        }
    }

    pub fn level(self) -> usize {
        match self {
            LevyClass::Delta0 => 0,
            LevyClass::Sigma(n) | LevyClass::Pi(n) => n,
        }
    }

    /// Whether every formula of class `other` lies in this class.
    pub fn contains(self, other: LevyClass) -> bool {
        match other {
            LevyClass::Delta0 => true,
            LevyClass::Sigma(m) => self.admits(Some(Quantifier::Exists), m),
            LevyClass::Pi(m) => self.admits(Some(Quantifier::Forall), m),
        }
    }

    /// Whether a prefix with `blocks` alternation blocks led by `lead` lies in this class.
    pub fn admits(self, lead: Option<Quantifier>, blocks: usize) -> bool {
        match (self, lead) {
            (_, None) => true,
            (LevyClass::Delta0, Some(_)) => false,
            (LevyClass::Sigma(n), Some(q)) => {
                blocks < n || (blocks == n && q == Quantifier::Exists)
            }
            (LevyClass::Pi(n), Some(q)) => blocks < n || (blocks == n && q == Quantifier::Forall),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == "Delta0" {
            return Some(LevyClass::Delta0);
        }
        let num = |p: &str| {
            s.strip_prefix(p)?
                .trim_matches(|c| c == '(' || c == ')')
                .parse::<usize>()
                .ok()
        };
        if let Some(n) = num("Sigma") {
            return Some(LevyClass::sigma(n));
        }
        num("Pi").map(LevyClass::pi)
    }
}

impl fmt::Display for LevyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevyClass::Delta0 => f.write_str("Delta0"),
            LevyClass::Sigma(n) => write!(f, "Sigma({n})"),
            LevyClass::Pi(n) => write!(f, "Pi({n})"),
        }
    }
}

impl Serialize for LevyClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Count alternation blocks of unbounded quantifiers in the prenex form.
pub fn levy_classify(f: &Formula) -> LevyClass {
    let (prefix, _) = prenex_parts(f);
    match prefix.lead() {
        None => LevyClass::Delta0,
        Some(Quantifier::Exists) => LevyClass::Sigma(prefix.block_count()),
        Some(Quantifier::Forall) => LevyClass::Pi(prefix.block_count()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_inferring;

    fn class(s: &str) -> LevyClass {
        levy_classify(&parse_inferring(s).unwrap().0)
    }

    #[test]
    fn basic_classes() {
        assert_eq!(class("(forall-in w x (in w y))"), LevyClass::Delta0);
        assert_eq!(class("(forall x (exists y (in x y)))"), LevyClass::Pi(2));
        assert_eq!(class("(exists y (in x y))"), LevyClass::Sigma(1));
        assert_eq!(class("(not (exists y (in x y)))"), LevyClass::Pi(1));
    }

    #[test]
    fn zero_levels_normalise() {
        assert_eq!(LevyClass::sigma(0), LevyClass::Delta0);
        assert_eq!(LevyClass::pi(0), LevyClass::Delta0);
        assert_eq!(LevyClass::parse("Sigma(2)"), Some(LevyClass::Sigma(2)));
        assert_eq!(LevyClass::parse("Pi(0)"), Some(LevyClass::Delta0));
    }
}
