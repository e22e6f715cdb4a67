//! Muller games via the latest appearance record (LAR).
//!
//! Relevant states are grouped into colour classes; the record is the list
//! of classes ordered by most recent visit, plus the position ("hit") the
//! visited class was taken from. The product with the arena carries a
//! min-parity colouring whose least recurring priority sits on the largest
//! hit seen infinitely often, i.e. on the exact recurring class set.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::graph::{Graph, Side, TwoPlayer, NO_MOVE};
use super::{parity, MachineTable, SolveError};

const NO_HIT: u8 = u8::MAX;

/// Muller condition over colour classes: `class_of[s]` is the class of
/// arena state `s` (`None` when the state cannot influence the outcome) and
/// `accept` tells whether the protagonist wins when exactly the given
/// classes recur.
pub(crate) struct ClassCondition<'a> {
    pub class_of: Vec<Option<usize>>,
    pub classes: usize,
    pub accept: &'a dyn Fn(&[bool]) -> bool,
}

pub(crate) struct LarProduct {
    pub game: TwoPlayer,
    pub priority: Vec<u64>,
    pub node_state: Vec<usize>,
    pub node_mem: Vec<usize>,
    /// Product node reached from the initial record by reading state `s`.
    pub entry: Vec<usize>,
    /// Memory transitions seen during exploration.
    pub step: HashMap<(usize, usize), usize>,
    pub memories: usize,
}

struct Records {
    index: HashMap<(Vec<u8>, u8), usize>,
    list: Vec<(Vec<u8>, u8)>,
}

impl Records {
    fn intern(&mut self, rec: (Vec<u8>, u8)) -> usize {
        if let Some(&id) = self.index.get(&rec) {
            return id;
        }
        let id = self.list.len();
        self.index.insert(rec.clone(), id);
        self.list.push(rec);
        id
    }
}

/// Builds the reachable LAR product from every arena state.
pub(crate) fn build(
    graph: &Graph,
    pro: &FixedBitSet,
    cond: &ClassCondition<'_>,
    budget: usize,
) -> Result<LarProduct, SolveError> {
    let k = cond.classes;
    if k >= NO_HIT as usize {
        return Err(SolveError::MemoryBudgetExceeded { budget });
    }
    let mut records = Records {
        index: HashMap::new(),
        list: Vec::new(),
    };
    let init = records.intern(((0..k as u8).collect(), NO_HIT));
    let mut node_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut node_state = Vec::new();
    let mut node_mem = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut step = HashMap::new();

    let advance = |records: &mut Records, step: &mut HashMap<(usize, usize), usize>, mem: usize, s: usize| -> usize {
        if let Some(&m) = step.get(&(mem, s)) {
            return m;
        }
        let (perm, _) = &records.list[mem];
        let next = match cond.class_of[s] {
            Some(c) => {
                let pos = perm.iter().position(|&x| x as usize == c).unwrap();
                let mut p = Vec::with_capacity(perm.len());
                p.push(c as u8);
                p.extend(perm.iter().copied().filter(|&x| x as usize != c));
                (p, pos as u8)
            }
            None => (perm.clone(), NO_HIT),
        };
        let m = records.intern(next);
        step.insert((mem, s), m);
        m
    };

    let mut queue = Vec::new();
    let mut entry = Vec::with_capacity(graph.len());
    for s in 0..graph.len() {
        let m = advance(&mut records, &mut step, init, s);
        let id = *node_of.entry((s, m)).or_insert_with(|| {
            node_state.push(s);
            node_mem.push(m);
            succ.push(Vec::new());
            queue.push(node_state.len() - 1);
            node_state.len() - 1
        });
        entry.push(id);
    }
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let (s, m) = (node_state[v], node_mem[v]);
        for &t in &graph.succ[s] {
            let m2 = advance(&mut records, &mut step, m, t);
            let w = match node_of.get(&(t, m2)) {
                Some(&w) => w,
                None => {
                    if node_state.len() >= budget {
                        return Err(SolveError::MemoryBudgetExceeded { budget });
                    }
                    let w = node_state.len();
                    node_of.insert((t, m2), w);
                    node_state.push(t);
                    node_mem.push(m2);
                    succ.push(Vec::new());
                    queue.push(w);
                    w
                }
            };
            succ[v].push(w);
        }
    }

    let empty_ok = (cond.accept)(&vec![false; k]);
    let mut present = vec![false; k];
    let priority = node_mem
        .iter()
        .map(|&m| {
            let (perm, hit) = &records.list[m];
            if *hit == NO_HIT {
                return 2 * k as u64 + u64::from(!empty_ok);
            }
            let h = *hit as usize;
            present.iter_mut().for_each(|p| *p = false);
            for &c in &perm[..=h] {
                present[c as usize] = true;
            }
            2 * (k - 1 - h) as u64 + u64::from(!(cond.accept)(&present))
        })
        .collect();
    let mut pro_nodes = FixedBitSet::with_capacity(node_state.len());
    for (v, &s) in node_state.iter().enumerate() {
        if pro.contains(s) {
            pro_nodes.insert(v);
        }
    }
    Ok(LarProduct {
        game: TwoPlayer {
            graph: Graph::from_succ(succ),
            pro: pro_nodes,
        },
        priority,
        node_state,
        node_mem,
        entry,
        step,
        memories: records.list.len(),
    })
}

pub(crate) struct MullerSolution {
    /// Arena states won by the protagonist.
    pub region: FixedBitSet,
    /// Protagonist strategy as a Moore machine over LAR records; moves are
    /// only meaningful inside `region`.
    pub machine: MachineTable,
}

pub(crate) fn solve(
    graph: &Graph,
    pro: &FixedBitSet,
    cond: &ClassCondition<'_>,
    budget: usize,
) -> Result<MullerSolution, SolveError> {
    let product = build(graph, pro, cond, budget)?;
    let sol = parity::solve(&product.game, &product.priority);
    let n = graph.len();
    let mut region = FixedBitSet::with_capacity(n);
    for s in 0..n {
        if sol.win[Side::Pro.index()].contains(product.entry[s]) {
            region.insert(s);
        }
    }
    let mems = product.memories;
    let mut update = vec![0usize; mems * n];
    for m in 0..mems {
        for s in 0..n {
            update[m * n + s] = product.step.get(&(m, s)).copied().unwrap_or(m);
        }
    }
    let mut moves = vec![NO_MOVE; mems * n];
    for (v, (&s, &m)) in product.node_state.iter().zip(&product.node_mem).enumerate() {
        if pro.contains(s) {
            let w = sol.strategy[v];
            moves[m * n + s] = if w != NO_MOVE && sol.win[0].contains(v) {
                product.node_state[w]
            } else {
                graph.succ[s][0]
            };
        }
    }
    for s in pro.ones() {
        for m in 0..mems {
            if moves[m * n + s] == NO_MOVE {
                moves[m * n + s] = graph.succ[s][0];
            }
        }
    }
    Ok(MullerSolution {
        region,
        machine: MachineTable {
            states: n,
            memories: mems,
            initial: 0,
            update,
            moves,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(n);
        xs.iter().for_each(|&x| m.insert(x));
        m
    }

    #[test]
    fn exact_set_condition_needs_memory() {
        // pro at 0 picks 1 or 2 which return to 0; wins iff exactly {0,1,2} recur.
        let g = Graph::from_succ(vec![vec![1, 2], vec![0], vec![0]]);
        let accept = |p: &[bool]| p.iter().all(|&x| x);
        let cond = ClassCondition {
            class_of: vec![Some(0), Some(1), Some(2)],
            classes: 3,
            accept: &accept,
        };
        let sol = solve(&g, &set(3, &[0]), &cond, 1000).unwrap();
        assert_eq!(sol.region.count_ones(..), 3);
        // the strategy alternates: simulate a few rounds from 0
        let m = &sol.machine;
        let mut mem = m.update[m.initial * 3];
        let mut s = 0;
        let mut seen = [false; 3];
        for _ in 0..12 {
            seen[s] = true;
            let next = if s == 0 { m.moves[mem * 3] } else { 0 };
            mem = m.update[mem * 3 + next];
            s = next;
        }
        assert!(seen.iter().all(|&x| x));
        let sol = solve(&g, &set(3, &[]), &cond, 1000).unwrap();
        assert_eq!(sol.region.count_ones(..), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::from_succ(vec![vec![1, 2], vec![0], vec![0]]);
        let accept = |p: &[bool]| p[0];
        let cond = ClassCondition {
            class_of: vec![Some(0), Some(1), Some(2)],
            classes: 3,
            accept: &accept,
        };
        assert!(matches!(
            solve(&g, &set(3, &[0]), &cond, 2),
            Err(SolveError::MemoryBudgetExceeded { .. })
        ));
    }
}
