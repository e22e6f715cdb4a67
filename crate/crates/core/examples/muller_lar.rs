//! A Muller game solved through the latest appearance record, compared with
//! the exhaustive lasso enumeration.

use segames::format::parse_game;
use segames::oracle::lasso_region;
use segames::zero_sum::coalition_region;

fn main() {
    let g = parse_game(include_str!("../games/muller_hub.game")).unwrap();
    let a = &g.arena;
    for (i, o) in g.objectives.iter().enumerate() {
        let player = i + 1;
        let r = coalition_region(a, &[player], &o.clone().into()).unwrap();
        println!("player {player} ({}) wins from {}", o.class_name(), r.display(a));
        let cooperative = lasso_region(a, &o.clone().into()).unwrap();
        println!("  some play satisfies it from {}", cooperative.display(a));
    }
}
