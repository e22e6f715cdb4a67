//! Streett games, solved by Zielonka's recursive scheme for Muller
//! conditions with the state itself as colour.
//!
//! In a subgame with state set `C`, the side that wins plays recurring on
//! all of `C` tries to keep the opponent away from every subset the
//! opponent would win on. It suffices to branch on a family of proper
//! subsets of `C` covering all opponent-winning subsets:
//!
//! * `C` satisfies every pair: Rabin-winning subsets avoid some `G_i` while
//!   meeting `F_i`, so the family is `{ C \ G_i | (C \ G_i) ∩ F_i ≠ ∅ }`.
//! * some pairs `J` are violated (`F_i` met, `G_i` missed): a Streett-winning
//!   subset must avoid `F_i` for all of them, so the single child is
//!   `C \ ⋃_{i∈J} F_i`.
//!
//! Rabin games are the same games seen from the other side.

use fixedbitset::FixedBitSet;

use super::graph::{Side, TwoPlayer};

/// `(F, G)`: the Streett side wins iff, for every pair, `F` does not recur
/// or `G` recurs.
pub(crate) type StreettPair = (FixedBitSet, FixedBitSet);

/// Winning regions `[streett_side, rabin_side]` when `streett` is the side
/// holding the Streett condition.
pub(crate) fn solve(game: &TwoPlayer, pairs: &[StreettPair], streett: Side) -> [FixedBitSet; 2] {
    let solver = Solver { game, pairs, streett };
    let [s, r] = solver.solve(game.graph.full());
    [s, r]
}

struct Solver<'a> {
    game: &'a TwoPlayer,
    pairs: &'a [StreettPair],
    streett: Side,
}

impl Solver<'_> {
    /// Returns `[streett region, rabin region]` of the subgame `within`.
    fn solve(&self, mut within: FixedBitSet) -> [FixedBitSet; 2] {
        let n = self.game.len();
        let mut acc = [FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n)];
        'outer: loop {
            if within.count_ones(..) == 0 {
                return acc;
            }
            let violated: Vec<usize> = (0..self.pairs.len())
                .filter(|&i| !self.pairs[i].0.is_disjoint(&within) && self.pairs[i].1.is_disjoint(&within))
                .collect();
            // 0 = streett, 1 = rabin in `acc` and in recursive results
            let (sigma, children) = if violated.is_empty() {
                let mut children: Vec<FixedBitSet> = Vec::new();
                for (f, g) in self.pairs {
                    let mut d = within.clone();
                    d.difference_with(g);
                    if !d.is_disjoint(f) && !children.contains(&d) {
                        children.push(d);
                    }
                }
                (0, children)
            } else {
                let mut d = within.clone();
                for &i in &violated {
                    d.difference_with(&self.pairs[i].0);
                }
                (1, vec![d])
            };
            let sigma_side = if sigma == 0 {
                self.streett
            } else {
                self.streett.opponent()
            };
            let opp = 1 - sigma;
            for d in children {
                let mut outside = within.clone();
                outside.difference_with(&d);
                let attr = self.game.attractor(&within, sigma_side, &outside, None);
                let mut rest = within.clone();
                rest.difference_with(&attr);
                let sub = self.solve(rest);
                if sub[opp].count_ones(..) > 0 {
                    let lost = self.game.attractor(&within, sigma_side.opponent(), &sub[opp], None);
                    acc[opp].union_with(&lost);
                    within.difference_with(&lost);
                    continue 'outer;
                }
            }
            acc[sigma].union_with(&within);
            return acc;
        }
    }
}
