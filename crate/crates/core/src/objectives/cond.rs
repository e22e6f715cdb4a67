//! Positive Boolean combinations of `Inf(X)` ("some state of X recurs") and
//! `Fin(X)` ("no state of X recurs") literals. Every objective class in the
//! crate lowers to this form; it feeds the Streett/Rabin recognisers and the
//! one-player emptiness checks.

use fixedbitset::FixedBitSet;

use super::{Objective, ObjectiveExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Cond {
    Inf(FixedBitSet),
    Fin(FixedBitSet),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

/// Disjunction `Inf(inf) ∨ Fin(f1) ∨ Fin(f2) ∨ ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Clause {
    pub inf: FixedBitSet,
    pub fins: Vec<FixedBitSet>,
}

/// Conjunction `Fin(fin) ∧ Inf(i1) ∧ Inf(i2) ∧ ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Term {
    pub fin: FixedBitSet,
    pub infs: Vec<FixedBitSet>,
}

fn set_of(n: usize, states: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for x in states {
        s.insert(x);
    }
    s
}

/// Keeps only the inclusion-minimal sets (duplicates collapse).
fn minimal_sets(mut sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    sets.sort_by_key(|s| s.count_ones(..));
    let mut out: Vec<FixedBitSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out
}

impl Cond {
    #[cfg(test)]
    pub fn tt() -> Cond {
        Cond::And(Vec::new())
    }

    #[cfg(test)]
    pub fn ff() -> Cond {
        Cond::Or(Vec::new())
    }

    pub fn from_expr(e: &ObjectiveExpr, n: usize) -> Cond {
        Self::lower(e, n, false)
    }

    fn lower(e: &ObjectiveExpr, n: usize, negated: bool) -> Cond {
        match (e, negated) {
            (ObjectiveExpr::Leaf(o), false) => Self::from_objective(o, n),
            (ObjectiveExpr::Leaf(o), true) => Self::from_objective(&o.negate(), n),
            (ObjectiveExpr::Not(x), neg) => Self::lower(x, n, !neg),
            (ObjectiveExpr::And(xs), false) | (ObjectiveExpr::Or(xs), true) => {
                Cond::And(xs.iter().map(|x| Self::lower(x, n, negated)).collect())
            }
            (ObjectiveExpr::Or(xs), false) | (ObjectiveExpr::And(xs), true) => {
                Cond::Or(xs.iter().map(|x| Self::lower(x, n, negated)).collect())
            }
        }
    }

    pub fn from_objective(o: &Objective, n: usize) -> Cond {
        match o {
            Objective::Buchi(b) => Cond::Inf(set_of(n, b.iter().copied())),
            Objective::CoBuchi(c) => Cond::Fin(set_of(n, c.iter().copied())),
            Objective::Parity(colors) => {
                // min colour is even  <=>  every odd colour c that recurs is
                // undercut by some recurring colour below c
                let mut odd: Vec<u64> = colors.iter().copied().filter(|c| c % 2 == 1).collect();
                odd.sort_unstable();
                odd.dedup();
                Cond::And(
                    odd.into_iter()
                        .map(|c| {
                            let at = (0..n).filter(|&s| colors[s] == c);
                            let below = (0..n).filter(|&s| colors[s] < c);
                            Cond::Or(vec![Cond::Fin(set_of(n, at)), Cond::Inf(set_of(n, below))])
                        })
                        .collect(),
                )
            }
            Objective::Streett(pairs) => Cond::And(
                pairs
                    .iter()
                    .map(|p| {
                        Cond::Or(vec![
                            Cond::Fin(set_of(n, p.f.iter().copied())),
                            Cond::Inf(set_of(n, p.g.iter().copied())),
                        ])
                    })
                    .collect(),
            ),
            Objective::Rabin(pairs) => Cond::Or(
                pairs
                    .iter()
                    .map(|p| {
                        Cond::And(vec![
                            Cond::Inf(set_of(n, p.f.iter().copied())),
                            Cond::Fin(set_of(n, p.g.iter().copied())),
                        ])
                    })
                    .collect(),
            ),
            Objective::Muller(f) => Self::from_formula(f, n),
        }
    }

    fn from_formula(f: &super::Formula, n: usize) -> Cond {
        use super::Formula as F;
        match f {
            F::Atom(s) => Cond::Inf(set_of(n, [*s])),
            F::NotAtom(s) => Cond::Fin(set_of(n, [*s])),
            F::And(xs) => Cond::And(xs.iter().map(|x| Self::from_formula(x, n)).collect()),
            F::Or(xs) => Cond::Or(xs.iter().map(|x| Self::from_formula(x, n)).collect()),
        }
    }

    pub fn negate(&self) -> Cond {
        match self {
            Cond::Inf(x) => Cond::Fin(x.clone()),
            Cond::Fin(x) => Cond::Inf(x.clone()),
            Cond::And(xs) => Cond::Or(xs.iter().map(Cond::negate).collect()),
            Cond::Or(xs) => Cond::And(xs.iter().map(Cond::negate).collect()),
        }
    }

    pub fn eval(&self, inf: &FixedBitSet) -> bool {
        match self {
            Cond::Inf(x) => !x.is_disjoint(inf),
            Cond::Fin(x) => x.is_disjoint(inf),
            Cond::And(xs) => xs.iter().all(|x| x.eval(inf)),
            Cond::Or(xs) => xs.iter().any(|x| x.eval(inf)),
        }
    }

    /// Union of every set mentioned by a literal.
    pub fn support(&self, n: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(n);
        self.collect_support(&mut out);
        out
    }

    fn collect_support(&self, out: &mut FixedBitSet) {
        match self {
            Cond::Inf(x) | Cond::Fin(x) => out.union_with(x),
            Cond::And(xs) | Cond::Or(xs) => xs.iter().for_each(|x| x.collect_support(out)),
        }
    }

    /// Re-expresses the condition over nodes of a product graph whose node
    /// `v` projects to arena state `labels[v]`.
    pub fn lift(&self, labels: &[usize]) -> Cond {
        let lift_set = |x: &FixedBitSet| set_of(labels.len(), (0..labels.len()).filter(|&v| x.contains(labels[v])));
        match self {
            Cond::Inf(x) => Cond::Inf(lift_set(x)),
            Cond::Fin(x) => Cond::Fin(lift_set(x)),
            Cond::And(xs) => Cond::And(xs.iter().map(|x| x.lift(labels)).collect()),
            Cond::Or(xs) => Cond::Or(xs.iter().map(|x| x.lift(labels)).collect()),
        }
    }

    /// Conjunctive normal form, or `None` past `limit` clauses.
    pub fn cnf(&self, n: usize, limit: usize) -> Option<Vec<Clause>> {
        Some(match self {
            Cond::Inf(x) => vec![Clause {
                inf: x.clone(),
                fins: vec![],
            }],
            Cond::Fin(x) => vec![Clause {
                inf: FixedBitSet::with_capacity(n),
                fins: vec![x.clone()],
            }],
            Cond::And(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(x.cnf(n, limit)?);
                    if out.len() > limit {
                        return None;
                    }
                }
                out
            }
            Cond::Or(xs) => {
                let mut acc = vec![Clause {
                    inf: FixedBitSet::with_capacity(n),
                    fins: vec![],
                }];
                for x in xs {
                    let part = x.cnf(n, limit)?;
                    if acc.len().saturating_mul(part.len()) > limit {
                        return None;
                    }
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for a in &acc {
                        for b in &part {
                            let mut inf = a.inf.clone();
                            inf.union_with(&b.inf);
                            let fins = minimal_sets(a.fins.iter().chain(&b.fins).cloned().collect());
                            next.push(Clause { inf, fins });
                        }
                    }
                    acc = next;
                }
                acc
            }
        })
    }

    /// Disjunctive normal form, or `None` past `limit` terms.
    pub fn dnf(&self, n: usize, limit: usize) -> Option<Vec<Term>> {
        Some(match self {
            Cond::Inf(x) => vec![Term {
                fin: FixedBitSet::with_capacity(n),
                infs: vec![x.clone()],
            }],
            Cond::Fin(x) => vec![Term {
                fin: x.clone(),
                infs: vec![],
            }],
            Cond::Or(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(x.dnf(n, limit)?);
                    if out.len() > limit {
                        return None;
                    }
                }
                out
            }
            Cond::And(xs) => {
                let mut acc = vec![Term {
                    fin: FixedBitSet::with_capacity(n),
                    infs: vec![],
                }];
                for x in xs {
                    let part = x.dnf(n, limit)?;
                    if acc.len().saturating_mul(part.len()) > limit {
                        return None;
                    }
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for a in &acc {
                        for b in &part {
                            let mut fin = a.fin.clone();
                            fin.union_with(&b.fin);
                            let infs = minimal_sets(a.infs.iter().chain(&b.infs).cloned().collect());
                            next.push(Term { fin, infs });
                        }
                    }
                    acc = next;
                }
                acc
            }
        })
    }

    /// Streett pairs `(F, G)` meaning `Fin(F) ∨ Inf(G)`, if every CNF clause
    /// has at most one `Fin` literal. A clause without one gets `F = S`.
    pub fn as_streett(&self, n: usize, limit: usize) -> Option<Vec<(FixedBitSet, FixedBitSet)>> {
        let clauses = self.cnf(n, limit)?;
        clauses
            .into_iter()
            .map(|c| match c.fins.len() {
                0 => {
                    let mut all = FixedBitSet::with_capacity(n);
                    all.insert_range(..);
                    Some((all, c.inf))
                }
                1 => Some((c.fins.into_iter().next().unwrap(), c.inf)),
                _ => None,
            })
            .collect()
    }

    /// Rabin pairs `(F, G)` meaning `Inf(F) ∧ Fin(G)`, if every DNF term has
    /// at most one `Inf` literal. A term without one gets `F = S`.
    pub fn as_rabin(&self, n: usize, limit: usize) -> Option<Vec<(FixedBitSet, FixedBitSet)>> {
        let terms = self.dnf(n, limit)?;
        terms
            .into_iter()
            .map(|t| match t.infs.len() {
                0 => {
                    let mut all = FixedBitSet::with_capacity(n);
                    all.insert_range(..);
                    Some((all, t.fin))
                }
                1 => Some((t.infs.into_iter().next().unwrap(), t.fin)),
                _ => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, xs: &[usize]) -> FixedBitSet {
        set_of(n, xs.iter().copied())
    }

    #[test]
    fn cnf_of_disjunction_distributes() {
        let c = Cond::Or(vec![
            Cond::And(vec![Cond::Inf(s(4, &[0])), Cond::Inf(s(4, &[1]))]),
            Cond::Fin(s(4, &[2])),
        ]);
        let pairs = c.as_streett(4, 100).unwrap();
        assert_eq!(pairs, vec![(s(4, &[2]), s(4, &[0])), (s(4, &[2]), s(4, &[1]))]);
    }

    #[test]
    fn two_fins_in_a_clause_are_not_streett() {
        let c = Cond::Or(vec![Cond::Fin(s(3, &[0])), Cond::Fin(s(3, &[1]))]);
        assert!(c.as_streett(3, 100).is_none());
        // nested fins collapse to the smaller one
        let c = Cond::Or(vec![Cond::Fin(s(3, &[0])), Cond::Fin(s(3, &[0, 1]))]);
        assert_eq!(c.as_streett(3, 100).unwrap(), vec![(s(3, &[0]), s(3, &[]))]);
    }

    #[test]
    fn constants() {
        assert_eq!(Cond::tt().cnf(2, 10).unwrap().len(), 0);
        assert_eq!(Cond::ff().cnf(2, 10).unwrap().len(), 1);
        assert_eq!(Cond::tt().dnf(2, 10).unwrap().len(), 1);
        assert_eq!(Cond::ff().dnf(2, 10).unwrap().len(), 0);
        assert!(Cond::tt().eval(&s(2, &[0])));
        assert!(!Cond::ff().eval(&s(2, &[0])));
    }

    #[test]
    fn limits_are_respected() {
        let big = Cond::And(
            (0..12)
                .map(|i| Cond::Or(vec![Cond::Inf(s(24, &[i])), Cond::Fin(s(24, &[i + 12]))]))
                .collect(),
        );
        assert!(big.dnf(24, 1000).is_none());
        assert_eq!(big.cnf(24, 1000).unwrap().len(), 12);
    }
}
