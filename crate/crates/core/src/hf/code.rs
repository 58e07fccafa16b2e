//! Pointed codes: finite binary relations whose top element 0 codes a set by
//! Mostowski collapse. A pair `(u, v)` in the relation reads "u is a member of v".

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::HFSet;

/// Codes are stored with at most this many nodes; predecessor sets are bitmasks.
pub const MAX_CODE_DOMAIN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointedCode {
    pub domain: usize,
    pub rel: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WfeCheck {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl WfeCheck {
    fn ok() -> Self {
        WfeCheck {
            valid: true,
            reason: None,
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        WfeCheck {
            valid: false,
            reason: Some(reason.into()),
        }
    }
}

impl PointedCode {
    pub fn new(domain: usize, rel: Vec<(usize, usize)>) -> Self {
        PointedCode { domain, rel }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code serializes")
    }

    /// `preds[v]` has bit `u` set when `(u, v)` is in the relation.
    /// Callers check the range first.
    pub(crate) fn preds(&self) -> Vec<u64> {
        let mut p = vec![0u64; self.domain];
        for &(u, v) in &self.rel {
            p[v] |= 1 << u;
        }
        p
    }

    /// Check every clause of the code invariant; the reason names the first
    /// failing clause in the order range, cycle, top, reachability, extensionality.
    pub fn is_wfe(&self) -> WfeCheck {
        if self.domain == 0 || self.domain > MAX_CODE_DOMAIN {
            return WfeCheck::fail(format!("range: domain must be 1..={MAX_CODE_DOMAIN}"));
        }
        if let Some(&(u, v)) = self
            .rel
            .iter()
            .find(|&&(u, v)| u >= self.domain || v >= self.domain)
        {
            return WfeCheck::fail(format!(
                "range: pair ({u},{v}) outside domain {}",
                self.domain
            ));
        }
        check_preds(&self.preds())
    }

    pub(crate) fn validate(&self) -> Result<Vec<u64>> {
        match self.is_wfe() {
            WfeCheck { valid: true, .. } => Ok(self.preds()),
            WfeCheck { reason, .. } => Err(Error::InvalidCode(reason.unwrap_or_default())),
        }
    }
}

/// Nodes in an order where every predecessor comes before its successor, or
/// `None` on a cycle.
pub(crate) fn topological(preds: &[u64]) -> Option<Vec<usize>> {
    let n = preds.len();
    let mut done = 0u64;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&v| done >> v & 1 == 0 && preds[v] & !done == 0)?;
        done |= 1 << next;
        order.push(next);
    }
    Some(order)
}

/// The code invariant on predecessor masks.
pub(crate) fn check_preds(preds: &[u64]) -> WfeCheck {
    let n = preds.len();
    if topological(preds).is_none() {
        return WfeCheck::fail("cycle");
    }
    if let Some(v) = (0..n).find(|&v| preds[v] & 1 == 1) {
        return WfeCheck::fail(format!("top: node 0 is a member of node {v}"));
    }
    // Nodes reaching 0, found by walking predecessor sets from the top.
    let mut reach = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        for (v, p) in preds.iter().enumerate() {
            if frontier >> v & 1 == 1 {
                next |= p;
            }
        }
        frontier = next & !reach;
        reach |= next;
    }
    if let Some(v) = (0..n).find(|&v| reach >> v & 1 == 0) {
        return WfeCheck::fail(format!("reachability: node {v} does not reach the top"));
    }
    for i in 0..n {
        for j in i + 1..n {
            if preds[i] == preds[j] {
                return WfeCheck::fail(format!(
                    "extensionality: nodes {i},{j} share predecessor set"
                ));
            }
        }
    }
    WfeCheck::ok()
}

pub fn is_wfe(c: &PointedCode) -> WfeCheck {
    c.is_wfe()
}

/// Collapse value of every node of a valid code.
fn collapse_all(preds: &[u64]) -> Vec<HFSet> {
    let order = topological(preds).expect("validated code is acyclic");
    let mut val: Vec<Option<HFSet>> = vec![None; preds.len()];
    for v in order {
        let elems = (0..preds.len())
            .filter(|&u| preds[v] >> u & 1 == 1)
            .map(|u| val[u].clone().expect("predecessor collapsed first"))
            .collect();
        val[v] = Some(HFSet::new(elems));
    }
    val.into_iter()
        .map(|x| x.expect("all nodes collapsed"))
        .collect()
}

/// The set coded by the top element.
pub fn collapse(c: &PointedCode) -> Result<HFSet> {
    let preds = c.validate()?;
    Ok(collapse_all(&preds).swap_remove(0))
}

/// Canonical code of `a`: breadth-first over the transitive closure from the
/// top, children in Ackermann order, labels assigned on first visit.
pub fn encode(a: &HFSet) -> PointedCode {
    let mut label: HashMap<&HFSet, usize> = HashMap::new();
    let mut nodes: Vec<&HFSet> = vec![a];
    label.insert(a, 0);
    let mut rel = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for child in nodes[v].elements() {
            let u = match label.get(child) {
                Some(&u) => u,
                None => {
                    let u = nodes.len();
                    nodes.push(child);
                    label.insert(child, u);
                    queue.push_back(u);
                    u
                }
            };
            rel.push((u, v));
        }
    }
    PointedCode {
        domain: nodes.len(),
        rel,
    }
}

/// Hash-consing of collapse values: nodes with the same collapse get the
/// same id, computed bottom-up from sorted child ids. Shared across codes so
/// ids can be compared between them.
#[derive(Debug, Default)]
pub struct Interner {
    ids: HashMap<Vec<u32>, u32>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ids of every node of a validated code.
    pub(crate) fn node_ids(&mut self, preds: &[u64]) -> Vec<u32> {
        let order = topological(preds).expect("validated code is acyclic");
        let mut id = vec![u32::MAX; preds.len()];
        for v in order {
            let mut key: Vec<u32> = (0..preds.len())
                .filter(|&u| preds[v] >> u & 1 == 1)
                .map(|u| id[u])
                .collect();
            key.sort_unstable();
            key.dedup();
            let fresh = self.ids.len() as u32;
            id[v] = *self.ids.entry(key).or_insert(fresh);
        }
        id
    }

    pub fn top_id(&mut self, c: &PointedCode) -> Result<u32> {
        Ok(self.node_ids(&c.validate()?)[0])
    }
}

/// Whether two codes code the same set, by comparing canonical ids.
pub fn graphs_equal(c1: &PointedCode, c2: &PointedCode) -> Result<bool> {
    let mut i = Interner::new();
    Ok(i.top_id(c1)? == i.top_id(c2)?)
}

/// Whether the set coded by `c1` is a member of the set coded by `c2`.
pub fn graph_mem(c1: &PointedCode, c2: &PointedCode) -> Result<bool> {
    let mut i = Interner::new();
    let top = i.top_id(c1)?;
    let p2 = c2.validate()?;
    let ids = i.node_ids(&p2);
    Ok((0..c2.domain).any(|u| p2[0] >> u & 1 == 1 && ids[u] == top))
}

/// Pointed isomorphism between two codes, by backtracking over bijections
/// fixing the top.
pub fn pointed_isomorphic(c1: &PointedCode, c2: &PointedCode) -> Result<bool> {
    let (p1, p2) = (c1.validate()?, c2.validate()?);
    Ok(iso_preds(&p1, &p2))
}

fn iso_preds(p1: &[u64], p2: &[u64]) -> bool {
    let n = p1.len();
    if n != p2.len() {
        return false;
    }
    let deg = |p: &[u64], v: usize| {
        (
            p[v].count_ones(),
            (0..p.len()).filter(|&w| p[w] >> v & 1 == 1).count(),
        )
    };
    type Degree = dyn Fn(&[u64], usize) -> (u32, usize);
    fn go(p1: &[u64], p2: &[u64], map: &mut Vec<usize>, used: &mut u64, deg: &Degree) -> bool {
        let v = map.len();
        if v == p1.len() {
            return true;
        }
        for w in 0..p2.len() {
            if *used >> w & 1 == 1 || deg(p1, v) != deg(p2, w) {
                continue;
            }
            map.push(w);
            let consistent = (0..=v).all(|a| {
                let b = map[a];
                (p1[v] >> a & 1) == (p2[w] >> b & 1) && (p1[a] >> v & 1) == (p2[b] >> w & 1)
            });
            if consistent {
                *used |= 1 << w;
                if go(p1, p2, map, used, deg) {
                    return true;
                }
                *used &= !(1 << w);
            }
            map.pop();
        }
        false
    }
    let mut map = vec![0];
    let mut used = 1u64;
    p1[0] & 1 == p2[0] & 1 && go(p1, p2, &mut map, &mut used, &deg)
}

/// The code rooted at node `v`: the nodes reaching `v`, with `v` relabeled 0
/// and the rest in increasing order.
pub fn subcode(c: &PointedCode, v: usize) -> Result<PointedCode> {
    let preds = c.validate()?;
    if v >= c.domain {
        return Err(Error::InvalidCode(format!(
            "node {v} outside domain {}",
            c.domain
        )));
    }
    let mut reach = 1u64 << v;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for u in 0..c.domain {
            if preds[x] >> u & 1 == 1 && reach >> u & 1 == 0 {
                reach |= 1 << u;
                stack.push(u);
            }
        }
    }
    let mut label = vec![usize::MAX; c.domain];
    label[v] = 0;
    let mut next = 1;
    for (u, l) in label.iter_mut().enumerate() {
        if u != v && reach >> u & 1 == 1 {
            *l = next;
            next += 1;
        }
    }
    let rel = c
        .rel
        .iter()
        .filter(|&&(a, b)| reach >> a & 1 == 1 && reach >> b & 1 == 1)
        .map(|&(a, b)| (label[a], label[b]))
        .collect();
    Ok(PointedCode { domain: next, rel })
}

/// `graphs_equal` by isomorphism search.
pub fn graphs_equal_iso(c1: &PointedCode, c2: &PointedCode) -> Result<bool> {
    pointed_isomorphic(c1, c2)
}

/// `graph_mem` by isomorphism search against the subcodes below the top of `c2`.
pub fn graph_mem_iso(c1: &PointedCode, c2: &PointedCode) -> Result<bool> {
    let p2 = c2.validate()?;
    for u in 0..c2.domain {
        if p2[0] >> u & 1 == 1 && pointed_isomorphic(c1, &subcode(c2, u)?)? {
            return Ok(true);
        }
    }
    Ok(false)
}
