//! The three-player Büchi game used throughout the docs and tests.
//!
//! Player 1 owns `s0, s3, s4, s5`, player 2 owns `s1`, player 3 owns `s2`.
//! The triangle `s0 s1 s2` is fully connected and each corner has an exit
//! to a sink: `s0 → s3`, `s1 → s4`, `s2 → s5`.

use crate::arena::{validate_arena, GameArena, RawArena};
use crate::objectives::Objective;

/// Game file text of the same game, in the JSON format read by the CLI.
pub const FIG1_GAME: &str = include_str!("../games/fig1.game");

pub fn fig1_arena() -> GameArena {
    let mut raw = RawArena::new(3)
        .state("s0", 1)
        .state("s1", 2)
        .state("s2", 3)
        .state("s3", 1)
        .state("s4", 1)
        .state("s5", 1);
    for (a, b) in [
        ("s0", "s1"),
        ("s1", "s0"),
        ("s1", "s2"),
        ("s2", "s1"),
        ("s2", "s0"),
        ("s0", "s2"),
        ("s0", "s3"),
        ("s1", "s4"),
        ("s2", "s5"),
        ("s3", "s3"),
        ("s4", "s4"),
        ("s5", "s5"),
    ] {
        raw = raw.edge(a, b);
    }
    validate_arena(&raw).expect("fixture arena is valid")
}

/// `Büchi({s2, s4})`, `Büchi({s0, s5})`, `Büchi({s1, s3})`.
pub fn fig1_objectives() -> [Objective; 3] {
    [
        Objective::buchi([2, 4]),
        Objective::buchi([0, 5]),
        Objective::buchi([1, 3]),
    ]
}
