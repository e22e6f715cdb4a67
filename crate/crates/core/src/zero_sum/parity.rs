//! Zielonka's recursive algorithm for min-parity games. The protagonist wins
//! a play iff the least priority seen infinitely often is even.

use fixedbitset::FixedBitSet;

use super::graph::{Side, TwoPlayer, NO_MOVE};

pub(crate) struct ParitySolution {
    /// Winning regions, indexed by [`Side::index`].
    pub win: [FixedBitSet; 2],
    /// Positional strategy: for a node owned by the side that wins it, the
    /// successor to take. Meaningless elsewhere.
    pub strategy: Vec<usize>,
}

pub(crate) fn solve(game: &TwoPlayer, priority: &[u64]) -> ParitySolution {
    let n = game.len();
    let mut solver = Zielonka {
        game,
        priority,
        strategy: vec![NO_MOVE; n],
    };
    let all = game.graph.full();
    let win = solver.solve(all);
    debug_assert!(win[0].is_disjoint(&win[1]));
    debug_assert_eq!(win[0].count_ones(..) + win[1].count_ones(..), n);
    ParitySolution {
        win,
        strategy: solver.strategy,
    }
}

struct Zielonka<'a> {
    game: &'a TwoPlayer,
    priority: &'a [u64],
    strategy: Vec<usize>,
}

impl Zielonka<'_> {
    fn solve(&mut self, mut within: FixedBitSet) -> [FixedBitSet; 2] {
        let n = self.game.len();
        let mut acc = [FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n)];
        loop {
            let Some(min) = within.ones().map(|v| self.priority[v]).min() else {
                return acc;
            };
            let alpha = if min % 2 == 0 { Side::Pro } else { Side::Anti };
            let mut top = FixedBitSet::with_capacity(n);
            for v in within.ones().filter(|&v| self.priority[v] == min) {
                top.insert(v);
            }
            let attr = self.game.attractor(&within, alpha, &top, Some(&mut self.strategy));
            let mut rest = within.clone();
            rest.difference_with(&attr);
            let sub = self.solve(rest);
            let opp = alpha.opponent();
            if sub[opp.index()].count_ones(..) == 0 {
                // alpha wins everything left; nodes of top stay inside
                for v in top.ones().filter(|&v| self.game.side(v) == alpha) {
                    self.strategy[v] = self.game.graph.succ[v]
                        .iter()
                        .copied()
                        .find(|&w| within.contains(w))
                        .expect("subgame has no dead ends");
                }
                acc[alpha.index()].union_with(&within);
                return acc;
            }
            let lost = self
                .game
                .attractor(&within, opp, &sub[opp.index()], Some(&mut self.strategy));
            acc[opp.index()].union_with(&lost);
            within.difference_with(&lost);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zero_sum::graph::Graph;

    fn game(succ: Vec<Vec<usize>>, pro: &[usize]) -> TwoPlayer {
        let n = succ.len();
        let mut mask = FixedBitSet::with_capacity(n);
        pro.iter().for_each(|&v| mask.insert(v));
        TwoPlayer {
            graph: Graph::from_succ(succ),
            pro: mask,
        }
    }

    #[test]
    fn protagonist_escapes_to_even_loop() {
        // 0 (pro) -> {1, 2}; 1 -> 1 prio 1; 2 -> 2 prio 0
        let g = game(vec![vec![1, 2], vec![1], vec![2]], &[0]);
        let sol = solve(&g, &[1, 1, 0]);
        assert_eq!(sol.win[0].ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(sol.strategy[0], 2);
    }

    #[test]
    fn antagonist_choice_matters() {
        let g = game(vec![vec![1, 2], vec![1], vec![2]], &[]);
        let sol = solve(&g, &[1, 1, 0]);
        assert_eq!(sol.win[0].ones().collect::<Vec<_>>(), vec![2]);
        assert_eq!(sol.strategy[0], 1);
    }

    #[test]
    fn min_priority_decides_on_cycle() {
        // 0 -> 1 -> 0, priorities 2 and 1: odd wins
        let g = game(vec![vec![1], vec![0]], &[0, 1]);
        let sol = solve(&g, &[2, 1]);
        assert_eq!(sol.win[1].count_ones(..), 2);
        let sol = solve(&g, &[2, 3]);
        assert_eq!(sol.win[0].count_ones(..), 2);
    }
}
