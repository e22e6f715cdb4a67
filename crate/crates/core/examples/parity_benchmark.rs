//! Times the parity solver on a random two-player arena.
//!
//! `cargo run --release --example parity_benchmark -- 100000`

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segames::arena::GameArena;
use segames::objectives::Objective;
use segames::zero_sum::coalition_region;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(10_000, |s| s.parse().expect("state count"));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let owners: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            edges.push((s, rng.gen_range(0..n)));
        }
    }
    let a = GameArena::from_parts(2, names, owners, edges).unwrap();
    let colours = Objective::Parity((0..n).map(|_| rng.gen_range(0..8)).collect());
    let t = Instant::now();
    let r = coalition_region(&a, &[1], &colours.into()).unwrap();
    println!(
        "{n} states, {} edges: player 1 wins {} ({:?})",
        a.num_edges(),
        r.len(),
        t.elapsed()
    );
}
