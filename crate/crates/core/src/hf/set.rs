use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A hereditarily finite set. Elements are kept sorted in Ackermann order
/// and duplicate-free, so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HFSet(Vec<HFSet>);

impl Ord for HFSet {
    /// Ackermann order: `a < b` iff the largest element of the symmetric
    /// difference lies in `b`.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (self.0.iter().rev(), other.0.iter().rev());
        loop {
            match (i.next(), j.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet(Vec::new())
    }

    pub fn new(mut elements: Vec<HFSet>) -> Self {
        elements.sort();
        elements.dedup();
        HFSet(elements)
    }

    pub fn singleton(a: HFSet) -> Self {
        HFSet(vec![a])
    }

    pub fn pair(a: HFSet, b: HFSet) -> Self {
        HFSet::new(vec![a, b])
    }

    /// Elements in ascending Ackermann order.
    pub fn elements(&self) -> &[HFSet] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, a: &HFSet) -> bool {
        self.0.binary_search(a).is_ok()
    }

    /// `self ∪ {self}`.
    pub fn successor(&self) -> HFSet {
        let mut e = self.0.clone();
        e.push(self.clone());
        HFSet::new(e)
    }

    /// Transitive closure (the set itself excluded).
    pub fn transitive_closure(&self) -> BTreeSet<HFSet> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<&HFSet> = self.0.iter().collect();
        while let Some(a) = stack.pop() {
            if out.insert(a.clone()) {
                stack.extend(a.0.iter());
            }
        }
        out
    }

    pub fn tc_size(&self) -> usize {
        self.transitive_closure().len()
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|a| a.rank() + 1).max().unwrap_or(0)
    }

    /// `Σ_{b∈a} 2^ack(b)`, guarded against `u64` overflow.
    pub fn ackermann(&self) -> Result<u64> {
        self.0.iter().try_fold(0u64, |acc, b| {
            let k = b.ackermann()?;
            if k >= 64 {
                return Err(Error::Overflow(format!(
                    "Ackermann code of {self} exceeds 64 bits"
                )));
            }
            Ok(acc | (1u64 << k))
        })
    }

    pub fn from_ackermann(n: u64) -> HFSet {
        HFSet(
            (0..64)
                .filter(|&i| n >> i & 1 == 1)
                .map(HFSet::from_ackermann)
                .collect(),
        )
    }
}

pub fn ackermann(a: &HFSet) -> Result<u64> {
    a.ackermann()
}

pub fn ackermann_decode(n: u64) -> HFSet {
    HFSet::from_ackermann(n)
}

/// Largest `k` accepted by [`hf_universe`].
pub const MAX_UNIVERSE_LEVEL: usize = 5;

/// `|HF(k)|`: 0, 1, 2, 4, 16, 65536.
pub fn universe_size(k: usize) -> Result<u64> {
    if k > MAX_UNIVERSE_LEVEL {
        return Err(Error::CostGuard(format!(
            "HF({k}) exceeds the level bound {MAX_UNIVERSE_LEVEL}"
        )));
    }
    Ok((0..k).fold(0u64, |n, _| 1u64 << n))
}

/// The `k`-fold iterated powerset of ∅, in Ackermann order. `HF(k)` is
/// exactly the sets with codes below `|HF(k)|`.
pub fn hf_universe(k: usize) -> Result<Vec<HFSet>> {
    Ok((0..universe_size(k)?).map(HFSet::from_ackermann).collect())
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HFSet {
    type Err = Error;

    /// Literal syntax: `{}`, `{{}}`, `{{},{{}}}`; whitespace is ignored.
    fn from_str(s: &str) -> Result<HFSet> {
        let bytes: Vec<(usize, u8)> = s
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        let mut pos = 0;
        let set = parse_set(&bytes, &mut pos)?;
        if let Some(&(off, _)) = bytes.get(pos) {
            return Err(Error::Syntax {
                offset: off,
                message: "trailing input after set literal".into(),
            });
        }
        Ok(set)
    }
}

fn parse_set(b: &[(usize, u8)], pos: &mut usize) -> Result<HFSet> {
    let err = |pos: usize, message: &str| Error::Syntax {
        offset: b.get(pos).map_or(b.last().map_or(0, |x| x.0 + 1), |x| x.0),
        message: message.into(),
    };
    if b.get(*pos).map(|x| x.1) != Some(b'{') {
        return Err(err(*pos, "expected `{`"));
    }
    *pos += 1;
    let mut elems = Vec::new();
    if b.get(*pos).map(|x| x.1) == Some(b'}') {
        *pos += 1;
        return Ok(HFSet::empty());
    }
    loop {
        elems.push(parse_set(b, pos)?);
        match b.get(*pos).map(|x| x.1) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HFSet::new(elems));
            }
            _ => return Err(err(*pos, "expected `,` or `}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> HFSet {
        t.parse().unwrap()
    }

    #[test]
    fn codes() {
        assert_eq!(s("{}").ackermann().unwrap(), 0);
        assert_eq!(s("{{},{{}}}").ackermann().unwrap(), 3);
        assert_eq!(ackermann_decode(2), s("{{{}}}"));
        for n in 0..300 {
            assert_eq!(ackermann_decode(n).ackermann().unwrap(), n);
        }
    }

    #[test]
    fn order_matches_codes() {
        let sets: Vec<HFSet> = (0..200).map(ackermann_decode).collect();
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn universe_sizes() {
        let sizes: Vec<usize> = (0..=4).map(|k| hf_universe(k).unwrap().len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 4, 16]);
        assert!(hf_universe(6).is_err());
    }

    #[test]
    fn literal_roundtrip_and_errors() {
        assert_eq!(s(" { {} , {{}} } ").to_string(), "{{},{{}}}");
        assert_eq!(s("{{},{}}").to_string(), "{{}}");
        assert!("{".parse::<HFSet>().is_err());
        assert!("{}}".parse::<HFSet>().is_err());
    }

    #[test]
    fn overflow_guard() {
        // A set containing an element with code 64.
        let big = HFSet::singleton(ackermann_decode(64));
        assert!(matches!(big.ackermann(), Err(Error::Overflow(_))));
    }

    #[test]
    fn transitive_closure() {
        assert_eq!(s("{{},{{}}}").tc_size(), 2);
        assert_eq!(s("{{{}}}").tc_size(), 2);
        assert_eq!(s("{}").successor(), s("{{}}"));
    }
}
