//! Exhaustive check that valid codes modulo collapse equality, with the
//! induced membership, are isomorphic to the hereditarily finite sets of
//! small transitive closure.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;

use super::code::{check_preds, graph_mem_iso, graphs_equal_iso, Interner};
use super::eval::member;
use super::{collapse, HFDomain, HFSet, PointedCode};

/// Largest code domain for exhaustive enumeration (2^25 relations).
pub const MAX_QUOTIENT_DOMAIN: usize = 5;

/// Predecessor masks of the relation on `d` nodes whose bit `u*d + v` means `(u, v)`.
pub(crate) fn mask_preds(d: usize, mask: u64) -> Vec<u64> {
    let mut p = vec![0u64; d];
    for u in 0..d {
        for (v, pv) in p.iter_mut().enumerate() {
            if mask >> (u * d + v) & 1 == 1 {
                *pv |= 1 << u;
            }
        }
    }
    p
}

pub(crate) fn mask_code(d: usize, mask: u64) -> PointedCode {
    let mut rel = Vec::new();
    for u in 0..d {
        for v in 0..d {
            if mask >> (u * d + v) & 1 == 1 {
                rel.push((u, v));
            }
        }
    }
    PointedCode::new(d, rel)
}

/// Ackermann code of the top of a valid code given by predecessor masks.
pub(crate) fn top_value(preds: &[u64]) -> Result<u64> {
    let order = super::code::topological(preds).expect("valid code");
    let mut val = vec![0u64; preds.len()];
    for v in order {
        let mut acc = 0u64;
        for (u, &vu) in val.iter().enumerate() {
            if preds[v] >> u & 1 == 1 {
                if vu >= 64 {
                    return Err(Error::Overflow(
                        "collapse value exceeds 64-bit Ackermann codes".into(),
                    ));
                }
                acc |= 1 << vu;
            }
        }
        val[v] = acc;
    }
    Ok(val[0])
}

/// All valid codes with domain `1..=m`, as (domain, mask, top value), in
/// order of domain then mask.
pub fn valid_codes(m: usize) -> Result<Vec<(usize, u64, u64)>> {
    if m == 0 || m > MAX_QUOTIENT_DOMAIN {
        return Err(Error::CostGuard(format!(
            "code domain bound {m} outside 1..={MAX_QUOTIENT_DOMAIN}"
        )));
    }
    let mut out = Vec::new();
    for d in 1..=m {
        let total = 1u64 << (d * d);
        // Chunks keep the parallel map coarse.
        let chunk = 1u64 << 12;
        let chunks = total.div_ceil(chunk) as usize;
        let found = par::map_range(chunks, |c| -> Result<Vec<(usize, u64, u64)>> {
            let lo = c as u64 * chunk;
            let hi = (lo + chunk).min(total);
            let mut v = Vec::new();
            for mask in lo..hi {
                let preds = mask_preds(d, mask);
                if check_preds(&preds).valid {
                    v.push((d, mask, top_value(&preds)?));
                }
            }
            Ok(v)
        });
        for f in found {
            out.extend(f?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub m: usize,
    pub k: usize,
    /// Relations examined, over all domains `1..=m`.
    pub relations: u64,
    pub valid_codes: usize,
    /// Collapse values of the classes, in Ackermann order, as set literals.
    pub classes: Vec<String>,
    /// Whether the classes are exactly the sets with transitive closure below `m`.
    pub classes_match: bool,
    pub equivalence: bool,
    pub congruence: bool,
    /// Whether collapse carries induced membership onto true membership.
    pub membership_preserved: bool,
    /// Whether every element of `HF(k)` occurs as a class.
    pub level_covered: bool,
    pub passes: bool,
    pub relativization: String,
}

/// Verify, over every relation on at most `m` nodes, that collapse equality
/// is an equivalence, induced membership is a congruence, and the quotient is
/// isomorphic to the sets with transitive closure below `m`.
pub fn quotient_check(m: usize, k: usize) -> Result<QuotientReport> {
    let level = HFDomain::level(k)?;
    if let Some(bad) = level.sets().into_iter().find(|a| a.tc_size() >= m) {
        return Err(Error::BoundMismatch(format!(
            "{bad} ∈ HF({k}) has transitive closure of size {}, so it has no code on {m} nodes",
            bad.tc_size()
        )));
    }
    let codes = valid_codes(m)?;
    let n = codes.len();
    let mut interner = Interner::new();
    let ids: Vec<(u32, Vec<u32>)> = codes
        .iter()
        .map(|&(d, mask, _)| {
            let preds = mask_preds(d, mask);
            let node_ids = interner.node_ids(&preds);
            let below = (0..d)
                .filter(|&u| preds[0] >> u & 1 == 1)
                .map(|u| node_ids[u])
                .collect();
            (node_ids[0], below)
        })
        .collect();
    let eq = |i: usize, j: usize| ids[i].0 == ids[j].0;
    let mem = |i: usize, j: usize| ids[j].1.contains(&ids[i].0);
    // Equivalence: reflexive, symmetric, and rows of related codes coincide.
    let rows: Vec<Vec<bool>> = par::map_range(n, |i| (0..n).map(|j| eq(i, j)).collect());
    let equivalence = (0..n).all(|i| rows[i][i])
        && par::map_range(n, |i| {
            (0..n).all(|j| rows[i][j] == rows[j][i] && (!rows[i][j] || rows[i] == rows[j]))
        })
        .into_iter()
        .all(|b| b);
    // Congruence: membership depends only on the classes.
    let mut rep_of_class = std::collections::HashMap::new();
    for (i, (id, _)) in ids.iter().enumerate() {
        rep_of_class.entry(*id).or_insert(i);
    }
    let congruence = par::map_range(n, |i| {
        (0..n).all(|j| mem(i, j) == mem(rep_of_class[&ids[i].0], rep_of_class[&ids[j].0]))
    })
    .into_iter()
    .all(|b| b);
    let membership_preserved = par::map_range(n, |i| {
        (0..n).all(|j| mem(i, j) == member(codes[i].2, codes[j].2))
    })
    .into_iter()
    .all(|b| b);
    let values: BTreeSet<u64> = codes.iter().map(|c| c.2).collect();
    let expected: BTreeSet<u64> = HFDomain::tc_below(m)?.codes().iter().copied().collect();
    let classes_match = values == expected && rep_of_class.len() == values.len();
    let level_covered = level.codes().iter().all(|c| values.contains(c));
    let relations = (1..=m).map(|d| 1u64 << (d * d)).sum();
    let passes =
        classes_match && equivalence && congruence && membership_preserved && level_covered;
    Ok(QuotientReport {
        m,
        k,
        relations,
        valid_codes: n,
        classes: values
            .iter()
            .map(|&c| HFSet::from_ackermann(c).to_string())
            .collect(),
        classes_match,
        equivalence,
        congruence,
        membership_preserved,
        level_covered,
        passes,
        relativization: format!(
            "codes on at most {m} nodes; sets with transitive closure of size < {m}"
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualPathReport {
    pub m: usize,
    pub valid_codes: usize,
    pub pairs: usize,
    pub equal_disagreements: usize,
    pub member_disagreements: usize,
    /// Pairs where the canonical path disagrees with comparing collapses directly.
    pub collapse_disagreements: usize,
}

/// Compare canonical-id equality and membership with isomorphism search and
/// with collapse, on every ordered pair of valid codes with domain ≤ `m`.
pub fn dual_path_check(m: usize) -> Result<DualPathReport> {
    let codes: Vec<PointedCode> = valid_codes(m)?
        .iter()
        .map(|&(d, mask, _)| mask_code(d, mask))
        .collect();
    let sets = codes.iter().map(collapse).collect::<Result<Vec<_>>>()?;
    let n = codes.len();
    let mut interner = Interner::new();
    let ids: Vec<(u32, Vec<u32>)> = codes
        .iter()
        .map(|c| {
            let preds = c.preds();
            let node_ids = interner.node_ids(&preds);
            let below = (0..c.domain)
                .filter(|&u| preds[0] >> u & 1 == 1)
                .map(|u| node_ids[u])
                .collect();
            (node_ids[0], below)
        })
        .collect();
    let per_row = par::map_range(n, |i| -> Result<(usize, usize, usize)> {
        let (mut de, mut dm, mut dc) = (0, 0, 0);
        for j in 0..n {
            let eq = ids[i].0 == ids[j].0;
            let mem = ids[j].1.contains(&ids[i].0);
            de += (eq != graphs_equal_iso(&codes[i], &codes[j])?) as usize;
            dm += (mem != graph_mem_iso(&codes[i], &codes[j])?) as usize;
            dc += (eq != (sets[i] == sets[j]) || mem != sets[j].contains(&sets[i])) as usize;
        }
        Ok((de, dm, dc))
    });
    let mut report = DualPathReport {
        m,
        valid_codes: n,
        pairs: n * n,
        equal_disagreements: 0,
        member_disagreements: 0,
        collapse_disagreements: 0,
    };
    for r in per_row {
        let (de, dm, dc) = r?;
        report.equal_disagreements += de;
        report.member_disagreements += dm;
        report.collapse_disagreements += dc;
    }
    Ok(report)
}
