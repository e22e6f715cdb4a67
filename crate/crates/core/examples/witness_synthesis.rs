//! Builds a secure equilibrium, prints it as a witness file and checks it
//! with the product-based verifier.

use segames::fixtures::{fig1_arena, fig1_objectives};
use segames::format::serialize_witness;
use segames::oracle::{verify_se, Verification};
use segames::secure_eq::{build_witness, Constraint};

fn main() {
    let a = fig1_arena();
    let objectives = fig1_objectives();
    let v = Constraint::parse("111", 3).unwrap();
    let w = build_witness(&a, &objectives, "s0", &v).unwrap();
    let s0 = a.state_id("s0").unwrap();
    println!("{}", serialize_witness(&a, &w, s0, &v));
    match verify_se(&a, &objectives, &w.profile, s0).unwrap() {
        Verification::Secure { payoff } => println!("secure, payoff {payoff}"),
        Verification::Deviation(d) => println!("player {} improves to {}", d.player, d.achievable),
    }
}
