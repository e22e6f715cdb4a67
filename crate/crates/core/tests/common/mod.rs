//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use segames::arena::{GameArena, Lasso, Player, StateId};
use segames::objectives::Objective;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` states named `s0..`, random owners, one to three successors each.
pub fn random_arena(rng: &mut impl Rng, n: usize, players: usize) -> GameArena {
    let names = (0..n).map(|i| format!("s{i}")).collect();
    let owner = (0..n).map(|_| rng.gen_range(1..=players)).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        let k = rng.gen_range(1..=3.min(n));
        let mut targets: Vec<StateId> = (0..n).collect();
        targets.shuffle(rng);
        edges.extend(targets[..k].iter().map(|&t| (s, t)));
    }
    GameArena::from_parts(players, names, owner, edges).expect("every state has a successor")
}

/// Each state independently with probability `p`.
pub fn random_set(rng: &mut impl Rng, n: usize, p: f64) -> Vec<StateId> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Buchi,
    CoBuchi,
    Parity,
}

pub const KINDS: [Kind; 3] = [Kind::Buchi, Kind::CoBuchi, Kind::Parity];

pub fn random_objective(rng: &mut impl Rng, n: usize, kind: Kind) -> Objective {
    match kind {
        Kind::Buchi => Objective::buchi(random_set(rng, n, 0.4)),
        Kind::CoBuchi => Objective::co_buchi(random_set(rng, n, 0.4)),
        Kind::Parity => {
            let top = rng.gen_range(1..=4);
            Objective::Parity((0..n).map(|_| rng.gen_range(0..=top)).collect())
        }
    }
}

/// One objective per player, each of a random kind from `kinds`.
pub fn random_profile(rng: &mut impl Rng, n: usize, players: usize, kinds: &[Kind]) -> Vec<Objective> {
    (0..players)
        .map(|_| {
            let kind = *kinds.choose(rng).unwrap();
            random_objective(rng, n, kind)
        })
        .collect()
}

/// Any subset of the players, possibly empty or everyone.
pub fn random_coalition(rng: &mut impl Rng, players: usize) -> Vec<Player> {
    (1..=players).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A random walk in `a` cut at its first repeated state.
pub fn random_lasso(rng: &mut impl Rng, a: &GameArena) -> Lasso {
    let mut word = vec![rng.gen_range(0..a.num_states())];
    loop {
        let cur = *word.last().unwrap();
        let next = *a.succ(cur).choose(rng).unwrap();
        if let Some(k) = word.iter().position(|&x| x == next) {
            let cycle = word.split_off(k);
            return Lasso::new(a, word, cycle).expect("walk follows edges");
        }
        word.push(next);
    }
}

pub fn names(a: &GameArena, xs: &[StateId]) -> String {
    a.format_set(xs.iter().copied())
}
