//! Explicit graphs shared by every solver: arenas, product arenas, and
//! one-chooser products all end up here.

use fixedbitset::FixedBitSet;

use crate::arena::GameArena;

pub(crate) const NO_MOVE: usize = usize::MAX;

#[derive(Debug, Clone, Default)]
pub(crate) struct Graph {
    pub succ: Vec<Vec<usize>>,
    pub pred: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_succ(mut succ: Vec<Vec<usize>>) -> Graph {
        let mut pred = vec![Vec::new(); succ.len()];
        for (v, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &w in list.iter() {
                pred[w].push(v);
            }
        }
        Graph { succ, pred }
    }

    pub fn from_arena(a: &GameArena) -> Graph {
        Graph::from_succ(a.states().map(|s| a.succ(s).to_vec()).collect())
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn full(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        all
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.succ[v].binary_search(&v).is_ok()
    }
}

/// Which side of a two-player game a node or solver result belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Pro,
    Anti,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Pro => Side::Anti,
            Side::Anti => Side::Pro,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Pro => 0,
            Side::Anti => 1,
        }
    }
}

/// A graph whose nodes are split between the protagonist (`pro` mask) and
/// the antagonist (everything else).
#[derive(Debug, Clone)]
pub(crate) struct TwoPlayer {
    pub graph: Graph,
    pub pro: FixedBitSet,
}

impl TwoPlayer {
    pub fn side(&self, v: usize) -> Side {
        if self.pro.contains(v) {
            Side::Pro
        } else {
            Side::Anti
        }
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    /// Least set inside `within` from which `side` forces a visit to
    /// `target`. For each of `side`'s attracted nodes outside the target the
    /// chosen successor is written to `strategy`.
    pub fn attractor(
        &self,
        within: &FixedBitSet,
        side: Side,
        target: &FixedBitSet,
        mut strategy: Option<&mut [usize]>,
    ) -> FixedBitSet {
        let n = self.len();
        let mut attr = target.clone();
        attr.grow(n);
        attr.intersect_with(within);
        let mut queue: Vec<usize> = attr.ones().collect();
        let mut remaining: Vec<u32> = vec![u32::MAX; n];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &u in &self.graph.pred[v] {
                if !within.contains(u) || attr.contains(u) {
                    continue;
                }
                let take = if self.side(u) == side {
                    if let Some(st) = strategy.as_deref_mut() {
                        st[u] = v;
                    }
                    true
                } else {
                    if remaining[u] == u32::MAX {
                        remaining[u] = self.graph.succ[u].iter().filter(|&&w| within.contains(w)).count() as u32;
                    }
                    remaining[u] -= 1;
                    remaining[u] == 0
                };
                if take {
                    attr.insert(u);
                    queue.push(u);
                }
            }
        }
        attr
    }
}

/// Strongly connected components of the subgraph induced by `mask`, each
/// sorted, in reverse topological order. Iterative Tarjan.
pub(crate) fn sccs(graph: &Graph, mask: &FixedBitSet) -> Vec<Vec<usize>> {
    let n = graph.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = FixedBitSet::with_capacity(n);
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // (node, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in mask.ones() {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack.insert(root);
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = &graph.succ[v];
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if !mask.contains(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack.insert(w);
                    call.push((w, 0));
                } else if on_stack.contains(w) {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack.set(w, false);
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Whether a component can be the recurring set of some play: more than one
/// node, or a single node with a self-loop.
pub(crate) fn is_nontrivial(graph: &Graph, comp: &[usize]) -> bool {
    comp.len() > 1 || graph.has_self_loop(comp[0])
}

/// Nodes inside `within` that can reach `target` along edges inside `within`.
pub(crate) fn backward_reach(graph: &Graph, within: &FixedBitSet, target: &FixedBitSet) -> FixedBitSet {
    let mut seen = target.clone();
    seen.grow(graph.len());
    seen.intersect_with(within);
    let mut stack: Vec<usize> = seen.ones().collect();
    while let Some(v) = stack.pop() {
        for &u in &graph.pred[v] {
            if within.contains(u) && !seen.contains(u) {
                seen.insert(u);
                stack.push(u);
            }
        }
    }
    seen
}

/// Shortest path `from → ... → to` inside `within`, both ends included.
pub(crate) fn shortest_path(graph: &Graph, within: &FixedBitSet, from: usize, to: &FixedBitSet) -> Option<Vec<usize>> {
    let n = graph.len();
    let mut parent = vec![NO_MOVE; n];
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(from);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if to.contains(v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &graph.succ[v] {
            if within.contains(w) && !seen.contains(w) {
                seen.insert(w);
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(n);
        xs.iter().for_each(|&x| m.insert(x));
        m
    }

    #[test]
    fn tarjan_finds_components() {
        // 0 <-> 1 -> 2 -> 3 -> 2, 4 isolated with self loop
        let g = Graph::from_succ(vec![vec![1], vec![0, 2], vec![3], vec![2], vec![4]]);
        let mut comps = sccs(&g, &g.full());
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
        let comps = sccs(&g, &mask(5, &[0, 2, 3]));
        assert!(comps.contains(&vec![0]));
        assert!(!is_nontrivial(&g, &[0]));
        assert!(is_nontrivial(&g, &[4]));
    }

    #[test]
    fn attractor_respects_ownership() {
        // 0 -> {1, 2}; 1 -> 1; 2 -> 2; target {1}
        let g = Graph::from_succ(vec![vec![1, 2], vec![1], vec![2]]);
        let pro_owns_0 = TwoPlayer {
            graph: g.clone(),
            pro: mask(3, &[0]),
        };
        let mut strat = vec![NO_MOVE; 3];
        let a = pro_owns_0.attractor(&g.full(), Side::Pro, &mask(3, &[1]), Some(&mut strat));
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(strat[0], 1);
        let anti_owns_0 = TwoPlayer {
            graph: g.clone(),
            pro: mask(3, &[]),
        };
        let a = anti_owns_0.attractor(&g.full(), Side::Pro, &mask(3, &[1]), None);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn paths() {
        let g = Graph::from_succ(vec![vec![1], vec![2], vec![0]]);
        assert_eq!(shortest_path(&g, &g.full(), 0, &mask(3, &[2])), Some(vec![0, 1, 2]));
        assert_eq!(shortest_path(&g, &mask(3, &[0, 2]), 0, &mask(3, &[2])), None);
        assert_eq!(backward_reach(&g, &g.full(), &mask(3, &[0])).count_ones(..), 3);
    }
}
