//! The two-step decision procedure on the bundled three-player Büchi game.

use segames::fixtures::{fig1_arena, fig1_objectives};
use segames::secure_eq::{analyze, Constraint, PayoffProfile};
use segames::zero_sum::SolverConfig;

fn main() {
    let a = fig1_arena();
    let objectives = fig1_objectives();
    let s0 = a.state_id("s0").unwrap();
    for v in PayoffProfile::all(3) {
        let v = Constraint::new(v.bits().to_vec());
        let an = analyze(&a, &objectives, &v, &SolverConfig::default()).unwrap();
        println!(
            "v = {v}: A_v = {:<22} SE_v = {:<22} from s0: {}",
            an.a_v.display(&a),
            an.se_v.display(&a),
            if an.se_v.contains(s0) { "yes" } else { "no" }
        );
    }
}
