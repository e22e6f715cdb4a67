//! One-player (cooperative) emptiness: is there a path in the graph whose
//! recurring set satisfies a condition?
//!
//! The recurring set of any infinite path is strongly connected, and every
//! strongly connected set is the recurring set of some path. So the task is
//! to find "good" strongly connected sets; the region is whatever can reach
//! one of them.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::graph::{backward_reach, is_nontrivial, sccs, shortest_path, Graph};
use super::SolveError;
use crate::objectives::cond::Cond;

const NORMAL_FORM_LIMIT: usize = 4096;

pub(crate) struct Cooperative<'a> {
    pub graph: &'a Graph,
    pub within: &'a FixedBitSet,
    pub budget: usize,
}

impl Cooperative<'_> {
    fn set(&self, comp: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.graph.len());
        comp.iter().for_each(|&v| s.insert(v));
        s
    }

    /// Strongly connected sets inside `within` satisfying `cond`. Every good
    /// set is contained in one of the returned ones' reach: a node reaches a
    /// good set iff it reaches a returned one.
    pub fn good_components(&self, cond: &Cond) -> Result<Vec<Vec<usize>>, SolveError> {
        let mut out = Vec::new();
        self.collect(cond, &mut out)?;
        Ok(out)
    }

    fn collect(&self, cond: &Cond, out: &mut Vec<Vec<usize>>) -> Result<(), SolveError> {
        let n = self.graph.len();
        if let Cond::Or(xs) = cond {
            for x in xs {
                self.collect(x, out)?;
            }
            return Ok(());
        }
        if let Some(pairs) = cond.as_streett(n, NORMAL_FORM_LIMIT) {
            self.streett(self.within.clone(), &pairs, out);
            return Ok(());
        }
        if let Some(terms) = cond.dnf(n, NORMAL_FORM_LIMIT) {
            for t in terms {
                let mut mask = self.within.clone();
                mask.difference_with(&t.fin);
                for comp in sccs(self.graph, &mask) {
                    if is_nontrivial(self.graph, &comp) {
                        let k = self.set(&comp);
                        if t.infs.iter().all(|i| !i.is_disjoint(&k)) {
                            out.push(comp);
                        }
                    }
                }
            }
            return Ok(());
        }
        let relevant = cond.support(n);
        let mut memo = HashSet::new();
        self.subsets(self.within.clone(), cond, &relevant, &mut memo, out)
    }

    /// Streett emptiness: drop the `F` sets of violated pairs and recurse into
    /// the remaining components. Each level retires at least one pair.
    fn streett(&self, mask: FixedBitSet, pairs: &[(FixedBitSet, FixedBitSet)], out: &mut Vec<Vec<usize>>) {
        for comp in sccs(self.graph, &mask) {
            if !is_nontrivial(self.graph, &comp) {
                continue;
            }
            let k = self.set(&comp);
            let mut bad = FixedBitSet::with_capacity(self.graph.len());
            for (f, g) in pairs {
                if !f.is_disjoint(&k) && g.is_disjoint(&k) {
                    bad.union_with(f);
                }
            }
            if bad.is_disjoint(&k) {
                out.push(comp);
            } else {
                let mut rest = k;
                rest.difference_with(&bad);
                self.streett(rest, pairs, out);
            }
        }
    }

    /// Generic search: a component that fails the condition is split by
    /// removing one mentioned node at a time. Removing unmentioned nodes never
    /// changes the verdict on a set, so they are kept.
    fn subsets(
        &self,
        mask: FixedBitSet,
        cond: &Cond,
        relevant: &FixedBitSet,
        memo: &mut HashSet<FixedBitSet>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), SolveError> {
        for comp in sccs(self.graph, &mask) {
            if !is_nontrivial(self.graph, &comp) {
                continue;
            }
            let k = self.set(&comp);
            if !memo.insert(k.clone()) {
                continue;
            }
            if memo.len() > self.budget {
                return Err(SolveError::MemoryBudgetExceeded { budget: self.budget });
            }
            if cond.eval(&k) {
                out.push(comp);
                continue;
            }
            for x in comp.iter().copied().filter(|&x| relevant.contains(x)) {
                let mut smaller = k.clone();
                smaller.set(x, false);
                self.subsets(smaller, cond, relevant, memo, out)?;
            }
        }
        Ok(())
    }

    /// Nodes of `within` that can reach one of `good`.
    pub fn region(&self, good: &[Vec<usize>]) -> FixedBitSet {
        let mut target = FixedBitSet::with_capacity(self.graph.len());
        good.iter().flatten().for_each(|&v| target.insert(v));
        backward_reach(self.graph, self.within, &target)
    }

    /// A lasso `(stem, cycle)` from `from` whose cycle visits exactly the
    /// nodes of one good component.
    pub fn lasso(&self, from: usize, good: &[Vec<usize>]) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut target = FixedBitSet::with_capacity(self.graph.len());
        good.iter().flatten().for_each(|&v| target.insert(v));
        let path = shortest_path(self.graph, self.within, from, &target)?;
        let entry = *path.last().unwrap();
        let comp = good.iter().find(|c| c.binary_search(&entry).is_ok())?;
        let k = self.set(comp);
        let mut stem = path;
        stem.pop();
        Some((stem, covering_cycle(self.graph, &k, entry)))
    }
}

/// A closed walk from `start` through every node of the strongly connected
/// set `k`, staying inside `k`. The walk is returned without repeating
/// `start` at the end.
pub(crate) fn covering_cycle(graph: &Graph, k: &FixedBitSet, start: usize) -> Vec<usize> {
    let mut walk = vec![start];
    let mut cur = start;
    let mut seen = FixedBitSet::with_capacity(graph.len());
    seen.insert(start);
    for target in k.ones() {
        if seen.contains(target) {
            continue;
        }
        let mut to = FixedBitSet::with_capacity(graph.len());
        to.insert(target);
        let path = shortest_path(graph, k, cur, &to).expect("component is strongly connected");
        for &v in &path[1..] {
            seen.insert(v);
            walk.push(v);
        }
        cur = target;
    }
    if cur == start {
        // single node, which carries a self-loop
        return walk;
    }
    let mut home = FixedBitSet::with_capacity(graph.len());
    home.insert(start);
    let back = shortest_path(graph, k, cur, &home).expect("component is strongly connected");
    walk.extend(&back[1..back.len() - 1]);
    walk
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(n);
        xs.iter().for_each(|&x| m.insert(x));
        m
    }

    fn is_closed_walk(g: &Graph, cycle: &[usize]) -> bool {
        (0..cycle.len()).all(|i| g.succ[cycle[i]].contains(&cycle[(i + 1) % cycle.len()]))
    }

    #[test]
    fn generalized_buchi_and_exclusion() {
        // 0 -> 1 -> 2 -> 0, 1 -> 3 -> 3
        let g = Graph::from_succ(vec![vec![1], vec![2, 3], vec![0], vec![3]]);
        let all = g.full();
        let coop = Cooperative {
            graph: &g,
            within: &all,
            budget: 1000,
        };
        let cond = Cond::And(vec![Cond::Inf(s(4, &[0])), Cond::Inf(s(4, &[2]))]);
        let good = coop.good_components(&cond).unwrap();
        assert_eq!(coop.region(&good), s(4, &[0, 1, 2]));
        let (stem, cycle) = coop.lasso(1, &good).unwrap();
        assert!(stem.is_empty() || stem[0] == 1);
        assert!(is_closed_walk(&g, &cycle));
        let cond = Cond::And(vec![Cond::Inf(s(4, &[3])), Cond::Fin(s(4, &[0]))]);
        let good = coop.good_components(&cond).unwrap();
        assert_eq!(good, vec![vec![3]]);
    }

    #[test]
    fn generic_search_handles_exact_sets() {
        // complete graph on 3 nodes with self loops, condition: exactly {0, 2}
        let g = Graph::from_succ(vec![vec![0, 1, 2]; 3]);
        let all = g.full();
        let coop = Cooperative {
            graph: &g,
            within: &all,
            budget: 1000,
        };
        let exact = Cond::And(vec![
            Cond::Inf(s(3, &[0])),
            Cond::Inf(s(3, &[2])),
            Cond::Fin(s(3, &[1])),
        ]);
        let good = coop.good_components(&exact).unwrap();
        assert!(good.iter().any(|c| c == &vec![0, 2]));
        // a condition that is neither Streett nor small in DNF is not needed to
        // reach the subset search; drive it directly
        let mut memo = HashSet::new();
        let mut out = Vec::new();
        coop.subsets(all.clone(), &exact, &s(3, &[0, 1, 2]), &mut memo, &mut out)
            .unwrap();
        assert!(out.iter().all(|c| exact.eval(&s(3, c))));
        assert!(!out.is_empty());
    }

    #[test]
    fn covering_cycles() {
        let g = Graph::from_succ(vec![vec![1], vec![2, 0], vec![1]]);
        let k = g.full();
        for start in 0..3 {
            let c = covering_cycle(&g, &k, start);
            assert_eq!(c[0], start);
            assert!(is_closed_walk(&g, &c));
            assert_eq!(s(3, &c), k);
        }
        let g = Graph::from_succ(vec![vec![0]]);
        assert_eq!(covering_cycle(&g, &g.full(), 0), vec![0]);
    }
}
