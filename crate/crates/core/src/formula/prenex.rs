//! Prenex conversion that keeps bounded quantifiers in the matrix.
//!
//! Quantifiers are pulled out with the usual equivalences after renaming
//! bound variables apart. When two quantifier prefixes meet at a binary
//! connective their blocks are interleaved so that the number of alternations
//! is minimal; each subformula keeps its best ∃-led and best ∀-led form so the
//! parent can choose. Bounded quantifiers stay in the matrix unless their body
//! contains an unbounded quantifier, in which case they are rewritten as
//! guarded unbounded ones. A biconditional with quantified sides is expanded
//! into two implications first.

use crate::formula::{Formula, Quantifier};

/// Quantifier prefix of a prenex formula.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Prefix(pub Vec<(Quantifier, String)>);

impl Prefix {
    /// Maximal runs of equal quantifiers.
    pub fn blocks(&self) -> Vec<(Quantifier, Vec<String>)> {
        let mut out: Vec<(Quantifier, Vec<String>)> = Vec::new();
        for (q, v) in &self.0 {
            match out.last_mut() {
                Some((lq, vs)) if lq == q => vs.push(v.clone()),
                _ => out.push((*q, vec![v.clone()])),
            }
        }
        out
    }

    pub fn block_count(&self) -> usize {
        self.blocks().len()
    }

    pub fn lead(&self) -> Option<Quantifier> {
        self.0.first().map(|(q, _)| *q)
    }

    fn dual(&self) -> Prefix {
        Prefix(self.0.iter().map(|(q, v)| (q.dual(), v.clone())).collect())
    }

    /// Wrap `matrix` in the prefix.
    pub fn apply(&self, matrix: Formula) -> Formula {
        self.0
            .iter()
            .rev()
            .fold(matrix, |acc, (q, v)| Formula::quant(*q, v.clone(), acc))
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    prefix: Prefix,
    matrix: Formula,
}

impl Candidate {
    fn blocks(&self) -> usize {
        self.prefix.block_count()
    }
}

/// Best prenex forms of a subformula.
#[derive(Debug, Clone, Default)]
struct Options {
    /// Present iff the subformula has no unbounded quantifier.
    bare: Option<Formula>,
    exists_led: Option<Candidate>,
    forall_led: Option<Candidate>,
    /// Lead of the first quantifier met left to right, polarity adjusted.
    natural: Option<Quantifier>,
}

impl Options {
    fn candidates(&self) -> Vec<Candidate> {
        if let Some(f) = &self.bare {
            return vec![Candidate {
                prefix: Prefix::default(),
                matrix: f.clone(),
            }];
        }
        let mut v: Vec<Candidate> = Vec::new();
        let (first, second) = match self.natural {
            Some(Quantifier::Forall) => (&self.forall_led, &self.exists_led),
            _ => (&self.exists_led, &self.forall_led),
        };
        v.extend(first.iter().cloned());
        v.extend(second.iter().cloned());
        v
    }

    fn dual(&self) -> Options {
        let flip = |c: &Candidate| Candidate {
            prefix: c.prefix.dual(),
            matrix: c.matrix.clone(),
        };
        Options {
            bare: self.bare.clone(),
            exists_led: self.forall_led.as_ref().map(flip),
            forall_led: self.exists_led.as_ref().map(flip),
            natural: self.natural.map(Quantifier::dual),
        }
    }

    fn offer(&mut self, c: Candidate) {
        let slot = match c.prefix.lead() {
            Some(Quantifier::Exists) => &mut self.exists_led,
            Some(Quantifier::Forall) => &mut self.forall_led,
            None => return,
        };
        match slot {
            Some(best) if best.blocks() <= c.blocks() => {}
            _ => *slot = Some(c),
        }
    }
}

fn merge(a: &Prefix, b: &Prefix, start: Quantifier) -> Prefix {
    let mut ab = a.blocks().into_iter().peekable();
    let mut bb = b.blocks().into_iter().peekable();
    let mut cur = start;
    let mut out = Vec::new();
    while ab.peek().is_some() || bb.peek().is_some() {
        for it in [&mut ab, &mut bb] {
            if matches!(it.peek(), Some((q, _)) if *q == cur) {
                let (q, vs) = it.next().expect("peeked");
                out.extend(vs.into_iter().map(|v| (q, v)));
            }
        }
        cur = cur.dual();
    }
    Prefix(out)
}

fn preprocess(f: &Formula) -> Formula {
    f.map_bottom_up(&|node| match node {
        Formula::BoundedForall(_, _, ref body) | Formula::BoundedExists(_, _, ref body)
            if body.has_unbounded_quantifier() =>
        {
            node.desugar_top()
        }
        Formula::Iff(a, b) if a.has_unbounded_quantifier() || b.has_unbounded_quantifier() => {
            Formula::and(
                Formula::implies((*a).clone(), (*b).clone()),
                Formula::implies(*b, *a),
            )
        }
        other => other,
    })
}

impl Formula {
    /// Desugar only the outermost bounded quantifier.
    fn desugar_top(self) -> Formula {
        match self {
            Formula::BoundedForall(w, t, body) => Formula::forall(
                w.clone(),
                Formula::implies(Formula::Member(crate::formula::Term::Var(w), t), *body),
            ),
            Formula::BoundedExists(w, t, body) => Formula::exists(
                w.clone(),
                Formula::and(Formula::Member(crate::formula::Term::Var(w), t), *body),
            ),
            other => other,
        }
    }
}

fn options(f: &Formula) -> Options {
    if !f.has_unbounded_quantifier() {
        return Options {
            bare: Some(f.clone()),
            ..Options::default()
        };
    }
    match f {
        Formula::Not(a) => {
            let inner = options(a).dual();
            let wrap = |c: Candidate| Candidate {
                prefix: c.prefix,
                matrix: Formula::not(c.matrix),
            };
            Options {
                bare: None,
                exists_led: inner.exists_led.map(wrap),
                forall_led: inner.forall_led.map(wrap),
                natural: inner.natural,
            }
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(f, Formula::Forall(..)) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let mut out = Options {
                natural: Some(q),
                ..Options::default()
            };
            for c in options(body).candidates() {
                let mut prefix = vec![(q, v.clone())];
                prefix.extend(c.prefix.0);
                out.offer(Candidate {
                    prefix: Prefix(prefix),
                    matrix: c.matrix,
                });
            }
            out
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let left = if matches!(f, Formula::Implies(..)) {
                options(a).dual()
            } else {
                options(a)
            };
            let right = options(b);
            let natural = left.natural.or(right.natural);
            let starts = match natural {
                Some(Quantifier::Forall) => [Quantifier::Forall, Quantifier::Exists],
                _ => [Quantifier::Exists, Quantifier::Forall],
            };
            let mut out = Options {
                natural,
                ..Options::default()
            };
            for ca in left.candidates() {
                for cb in right.candidates() {
                    for start in starts {
                        let prefix = merge(&ca.prefix, &cb.prefix, start);
                        let (ma, mb) = (ca.matrix.clone(), cb.matrix.clone());
                        let matrix = match f {
                            Formula::And(..) => Formula::and(ma, mb),
                            Formula::Or(..) => Formula::or(ma, mb),
                            _ => Formula::implies(ma, mb),
                        };
                        out.offer(Candidate { prefix, matrix });
                    }
                }
            }
            out
        }
        // Preprocessing removes the remaining cases (quantified biconditionals and
        // bounded quantifiers over unbounded bodies).
        _ => unreachable!("preprocessed formula"),
    }
}

/// Prefix and matrix of the chosen prenex form of `f`.
pub fn prenex_parts(f: &Formula) -> (Prefix, Formula) {
    let g = preprocess(f).rename_apart();
    let opts = options(&g);
    if let Some(bare) = opts.bare {
        return (Prefix::default(), bare);
    }
    let best = opts
        .candidates()
        .into_iter()
        .reduce(|best, c| if c.blocks() < best.blocks() { c } else { best })
        .expect("quantified formula has a candidate");
    (best.prefix, best.matrix)
}

/// Prenex normal form with unbounded quantifiers in front of a matrix that is
/// quantifier-free apart from bounded quantifiers.
pub fn to_prenex(f: &Formula) -> Formula {
    let (prefix, matrix) = prenex_parts(f);
    prefix.apply(matrix)
}
