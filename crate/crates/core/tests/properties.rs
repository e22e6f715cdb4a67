mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use segames::format::{parse_game, parse_witness, serialize_game, serialize_witness, Game};
use segames::objectives::{Objective, Pair};
use segames::oracle::verify_se;
use segames::secure_eq::{analyze, build_witness, outcome, payoff, Constraint, PayoffProfile};
use segames::zero_sum::{coalition_region, SolverConfig};

fn random_game(seed: u64) -> Game {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=6);
    let players = rng.gen_range(1..=3);
    let arena = random_arena(&mut rng, n, players);
    let mut objectives = random_profile(&mut rng, n, players, &KINDS);
    if rng.gen_bool(0.3) {
        let pairs = (0..rng.gen_range(0..=2))
            .map(|_| Pair::new(random_set(&mut rng, n, 0.4), random_set(&mut rng, n, 0.4)))
            .collect();
        objectives[0] = if rng.gen_bool(0.5) {
            Objective::Streett(pairs)
        } else {
            Objective::Rabin(pairs)
        };
    }
    Game { arena, objectives }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn game_files_round_trip(seed in any::<u64>()) {
        let g = random_game(seed);
        let back = parse_game(&serialize_game(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn witnesses_are_secure_and_survive_serialization(seed in any::<u64>()) {
        let g = random_game(seed);
        let (a, phi) = (&g.arena, &g.objectives);
        for v in PayoffProfile::all(a.players()) {
            let v = Constraint::new(v.bits().to_vec());
            let an = analyze(a, phi, &v, &SolverConfig::default()).unwrap();
            prop_assert!(an.se_v.as_bitset().is_subset(an.a_v.as_bitset()));
            for s in an.se_v.states() {
                let w = build_witness(a, phi, a.name(s), &v).unwrap();
                prop_assert_eq!(&payoff(&outcome(a, &w.profile, s), phi), &v.as_payoff());
                let text = serialize_witness(a, &w, s, &v);
                let (_, profile) = parse_witness(a, &text).unwrap();
                prop_assert!(verify_se(a, phi, &profile, s).unwrap().is_secure());
            }
        }
    }

    #[test]
    fn larger_coalitions_win_more(seed in any::<u64>()) {
        let g = random_game(seed);
        let a = &g.arena;
        let mut rng = rng(seed ^ 1);
        let small = random_coalition(&mut rng, a.players());
        let mut large = small.clone();
        large.push(rng.gen_range(1..=a.players()));
        let e = g.objectives[rng.gen_range(0..a.players())].clone().into();
        let r_small = coalition_region(a, &small, &e).unwrap();
        let r_large = coalition_region(a, &large, &e).unwrap();
        prop_assert!(r_small.as_bitset().is_subset(r_large.as_bitset()));
    }
}
