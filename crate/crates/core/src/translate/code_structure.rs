use serde::Serialize;

use crate::error::{Error, Result};
use crate::hf::{check_preds, mask_preds, member, top_value, HFDomain, HFSet, MAX_QUOTIENT_DOMAIN};
use crate::par;
use crate::structure::FinStructure;

use super::{code_signature, EQ, MEM, WFE};

/// Largest node count whose relation universe is fully materialized.
pub const MAX_MATERIALIZED: usize = 4;

/// The structure of all relations on `{0..m-1}` with the predicates `WFE`,
/// `EQ` and `MEM`.
///
/// A relation satisfies `WFE` when its field together with 0 is an initial
/// segment `{0..d-1}` and it is a valid code on those `d` nodes. `EQ` and `MEM`
/// are false unless both arguments satisfy `WFE`.
///
/// Relations with the same collapse satisfy the same atomic formulas, and so
/// do all relations failing `WFE`. Formulas without `=` therefore have the same
/// truth value in the quotient that keeps one relation per collapse value plus
/// one relation failing `WFE`; `quotient` is that structure, with the junk
/// element last.
#[derive(Debug, Clone, Serialize)]
pub struct CodeStructure {
    pub m: usize,
    /// `2^(m²)`.
    pub universe: u64,
    /// Size of the `WFE` extension, when materialized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wfe_count: Option<u64>,
    /// Ackermann codes of the collapse values, ascending; class `i` of the quotient.
    pub classes: Vec<u64>,
    #[serde(skip)]
    class_of: Option<Vec<Option<u32>>>,
    #[serde(skip)]
    pub quotient: FinStructure,
}

/// Class of a relation mask on `m` nodes: the Ackermann code of its collapse
/// when it satisfies `WFE`.
pub(crate) fn wfe_value(m: usize, mask: u64) -> Result<Option<u64>> {
    let mut field = 1u64;
    for u in 0..m {
        for v in 0..m {
            if mask >> (u * m + v) & 1 == 1 {
                field |= (1 << u) | (1 << v);
            }
        }
    }
    if field & (field + 1) != 0 {
        return Ok(None);
    }
    let d = field.count_ones() as usize;
    let preds: Vec<u64> = mask_preds(m, mask)[..d].to_vec();
    if !check_preds(&preds).valid {
        return Ok(None);
    }
    top_value(&preds).map(Some)
}

impl CodeStructure {
    pub fn is_materialized(&self) -> bool {
        self.class_of.is_some()
    }

    /// Quotient element of a relation mask; failing `WFE` maps to the junk element.
    pub fn element_of(&self, mask: u64) -> Result<usize> {
        let value = match &self.class_of {
            Some(table) => table[mask as usize].map(|i| self.classes[i as usize]),
            None => wfe_value(self.m, mask)?,
        };
        Ok(match value {
            Some(v) => self
                .classes
                .binary_search(&v)
                .expect("every collapse value is a class"),
            None => self.junk(),
        })
    }

    /// Quotient element coding `a`.
    pub fn element_of_set(&self, a: &HFSet) -> Result<usize> {
        let code = a.ackermann()?;
        self.classes
            .binary_search(&code)
            .map_err(|_| Error::BoundMismatch(format!("{a} has no code on {} nodes", self.m)))
    }

    pub fn junk(&self) -> usize {
        self.classes.len()
    }

    pub fn wfe(&self, mask: u64) -> Result<bool> {
        Ok(self.element_of(mask)? != self.junk())
    }

    pub fn eq(&self, r: u64, s: u64) -> Result<bool> {
        let (a, b) = (self.element_of(r)?, self.element_of(s)?);
        Ok(a != self.junk() && a == b)
    }

    pub fn mem(&self, r: u64, s: u64) -> Result<bool> {
        let (a, b) = (self.element_of(r)?, self.element_of(s)?);
        Ok(a != self.junk() && b != self.junk() && member(self.classes[a], self.classes[b]))
    }
}

/// Build the code structure on `m` nodes. Up to `MAX_MATERIALIZED` nodes every
/// relation is classified; above that, classes are taken from the sets of
/// transitive closure below `m` and predicates are computed on demand.
pub fn build_code_structure(m: usize) -> Result<CodeStructure> {
    if m == 0 || m > MAX_QUOTIENT_DOMAIN {
        return Err(Error::CostGuard(format!(
            "code structure on {m} nodes is outside 1..={MAX_QUOTIENT_DOMAIN}"
        )));
    }
    let universe = 1u64 << (m * m);
    let (classes, class_of, wfe_count) = if m <= MAX_MATERIALIZED {
        let values = par::map_range(universe as usize, |mask| wfe_value(m, mask as u64))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let mut classes: Vec<u64> = values.iter().flatten().copied().collect();
        classes.sort_unstable();
        classes.dedup();
        let class_of = values
            .iter()
            .map(|v| v.map(|v| classes.binary_search(&v).expect("listed") as u32))
            .collect();
        let count = values.iter().filter(|v| v.is_some()).count() as u64;
        (classes, Some(class_of), Some(count))
    } else {
        (HFDomain::tc_below(m)?.codes().to_vec(), None, None)
    };
    let n = classes.len() + 1;
    let sig = code_signature();
    let mut q = FinStructure::new(&sig, n)?;
    for (i, &a) in classes.iter().enumerate() {
        q.set_relation(WFE, &[i], true)?;
        q.set_relation(EQ, &[i, i], true)?;
        for (j, &b) in classes.iter().enumerate() {
            if member(a, b) {
                q.set_relation(MEM, &[i, j], true)?;
            }
        }
    }
    Ok(CodeStructure {
        m,
        universe,
        wfe_count,
        classes,
        class_of,
        quotient: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_universes() {
        let one = build_code_structure(1).unwrap();
        assert_eq!((one.universe, one.wfe_count), (2, Some(1)));
        let two = build_code_structure(2).unwrap();
        assert_eq!((two.universe, two.wfe_count), (16, Some(2)));
        assert_eq!(two.classes, vec![0, 1]);
    }

    #[test]
    fn predicates_on_three_nodes() {
        let c = build_code_structure(3).unwrap();
        // Masks on 3 nodes: bit u*3+v is the pair (u, v).
        let empty = 0u64;
        let one = 1 << 3; // (1,0)
        let loop0 = 1; // (0,0)
        assert!(c.wfe(empty).unwrap() && c.wfe(one).unwrap() && !c.wfe(loop0).unwrap());
        assert!(c.mem(empty, one).unwrap());
        assert!(!c.eq(loop0, loop0).unwrap());
        for mask in 0..c.universe {
            if c.wfe(mask).unwrap() {
                assert!(c.eq(mask, mask).unwrap());
            }
        }
    }

    #[test]
    fn streaming_matches_materialized_classes() {
        let c = build_code_structure(4).unwrap();
        assert_eq!(c.classes, HFDomain::tc_below(4).unwrap().codes());
        let s = build_code_structure(5).unwrap();
        assert!(!s.is_materialized());
        assert_eq!(s.element_of(0).unwrap(), 0);
        assert_eq!(s.element_of(1).unwrap(), s.junk());
    }
}
