//! Streett and Rabin encodings of a Büchi combination, solved on each route.

use segames::fixtures::{fig1_arena, fig1_objectives};
use segames::objectives::{rabin_encoding, streett_encoding, Objective, ObjectiveExpr};
use segames::zero_sum::{coalition_region_with, Route, SolverConfig};

fn pairs(o: &Objective) -> String {
    match o {
        Objective::Streett(ps) | Objective::Rabin(ps) => ps
            .iter()
            .map(|p| format!("({:?}, {:?})", p.f, p.g))
            .collect::<Vec<_>>()
            .join(" "),
        other => format!("{other:?}"),
    }
}

fn main() {
    let a = fig1_arena();
    let [p1, p2, p3] = fig1_objectives();
    let e = ObjectiveExpr::or([ObjectiveExpr::and([p1, p2, p3.clone()]), ObjectiveExpr::not(p3)]);
    let n = a.num_states();
    println!("streett: {}", pairs(&streett_encoding(&e, n).unwrap()));
    match rabin_encoding(&e, n) {
        Ok(o) => println!("rabin:   {}", pairs(&o)),
        Err(err) => println!("rabin:   {err}"),
    }
    let cfg = SolverConfig::default();
    for route in [Route::Streett, Route::Rabin, Route::Muller] {
        match coalition_region_with(&a, &[1, 2], &e, route, &cfg) {
            Ok(r) => println!("{:<8} {}", route.to_string(), r.display(&a)),
            Err(err) => println!("{:<8} {err}", route.to_string()),
        }
    }
}
