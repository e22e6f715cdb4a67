//! Cross-checks the decision procedure against the bounded-memory search on
//! every state and payoff of a small game.

use segames::format::parse_game;
use segames::oracle::{enumerate_bounded_se, BoundedSearch};
use segames::secure_eq::{compute_se_v, Constraint, PayoffProfile};

fn main() {
    let g = parse_game(include_str!("../games/parity_duel.game")).unwrap();
    let a = &g.arena;
    let mut disagreements = 0;
    for v in PayoffProfile::all(a.players()) {
        let v = Constraint::new(v.bits().to_vec());
        let se = compute_se_v(a, &g.objectives, &v).unwrap();
        for s in a.states() {
            let found = matches!(
                enumerate_bounded_se(a, &g.objectives, s, &v, 2).unwrap(),
                BoundedSearch::Found(_)
            );
            let mark = if found == se.contains(s) { "" } else { "  <- differs" };
            if !mark.is_empty() {
                disagreements += 1;
            }
            println!(
                "v={v} {:>3}: procedure {:<5} search {found}{mark}",
                a.name(s),
                se.contains(s)
            );
        }
    }
    println!("{disagreements} disagreements");
}
