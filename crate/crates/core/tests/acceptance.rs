//! Acceptance report: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. Limits below are the pinned tolerances.

mod common;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use common::*;
use rand::seq::SliceRandom;
use rand::Rng;
use segames::arena::{GameArena, StateId};
use segames::format::parse_game_file;
use segames::objectives::{satisfies, Objective, ObjectiveExpr};
use segames::oracle::{brute_region, enumerate_bounded_se, lasso_region, verify_se, BoundedSearch, Verification};
use segames::secure_eq::{
    build_witness, compute_a_v, compute_se_v, deviation_guard, outcome, payoff, prefers, Constraint, MooreStrategy,
    PayoffProfile,
};
use segames::zero_sum::{coalition_region, coalition_region_with, solve_cooperative, Route, SolverConfig};

const FIG1_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const BENCH_LIMIT: Duration = Duration::from_secs(10);
const LASSO_INSTANCES: usize = 1000;
const DETERMINACY_GAMES: usize = 200;
const ORACLE_GAMES: usize = 100;
const ENCODING_GAMES: usize = 100;
const PARITY_GAMES: usize = 100;
const BENCH_STATES: usize = 10_000;

type Outcome = Result<String, String>;

fn fig1_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/games/fig1.game").to_string()
}

fn set(a: &GameArena, names: &[&str]) -> Vec<StateId> {
    names.iter().map(|s| a.state_id(s).unwrap()).collect()
}

fn worked_example() -> Outcome {
    let t = Instant::now();
    let g = parse_game_file(fig1_path()).map_err(|e| e.to_string())?;
    let (a, phi) = (&g.arena, &g.objectives);
    let v = Constraint::parse("111", 3).unwrap();
    let expected = [
        (3, vec!["s0", "s1", "s2", "s4", "s5"]),
        (1, vec!["s0", "s1", "s2", "s3", "s5"]),
        (2, vec!["s0", "s1", "s2", "s3", "s4"]),
    ];
    let mut problems = String::new();
    for (i, want) in &expected {
        let others: Vec<usize> = (1..=3).filter(|p| p != i).collect();
        let r = coalition_region(a, &others, &deviation_guard(phi, &v, *i)).map_err(|e| e.to_string())?;
        if r.states() != set(a, want) {
            write!(problems, " <<{others:?}>> = {}", r.display(a)).unwrap();
        }
    }
    let a_v = compute_a_v(a, phi, &v).map_err(|e| e.to_string())?;
    let se = compute_se_v(a, phi, &v).map_err(|e| e.to_string())?;
    let triangle = set(a, &["s0", "s1", "s2"]);
    if a_v.states() != triangle {
        write!(problems, " A_v = {}", a_v.display(a)).unwrap();
    }
    if se.states() != triangle {
        write!(problems, " SE = {}", se.display(a)).unwrap();
    }
    let f = fig1_path();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = segames::cli::run(
        ["segames", "se-exists", &f, "--state", "s0", "--constraint", "111"],
        &mut out,
        &mut err,
    );
    if code != 0 {
        write!(problems, " se-exists exit {code}").unwrap();
    }
    let elapsed = t.elapsed();
    if elapsed >= FIG1_LIMIT {
        write!(problems, " took {elapsed:?}").unwrap();
    }
    if problems.is_empty() {
        Ok(format!(
            "3 regions, A_v, SE = {{s0, s1, s2}}, se-exists yes, {elapsed:?} < {FIG1_LIMIT:?}"
        ))
    } else {
        Err(problems)
    }
}

fn is_rotation(cycle: &[StateId], of: &[StateId]) -> bool {
    cycle.len() == of.len() && (0..of.len()).any(|k| (0..of.len()).all(|j| cycle[j] == of[(j + k) % of.len()]))
}

fn witness_behaviour() -> Outcome {
    let g = parse_game_file(fig1_path()).map_err(|e| e.to_string())?;
    let (a, phi) = (&g.arena, &g.objectives);
    let v = Constraint::parse("111", 3).unwrap();
    let w = build_witness(a, phi, "s0", &v).map_err(|e| e.to_string())?;
    let cycle = &w.outcome.cycle;
    if !(is_rotation(cycle, &[0, 1, 2]) || is_rotation(cycle, &[0, 2, 1])) {
        return Err(format!("outcome cycle {}", names(a, cycle)));
    }
    // player 1 always takes s0 → s2
    let deviant = MooreStrategy::positional(a, 1, |s| if s == 0 { 2 } else { a.succ(s)[0] }).unwrap();
    let play = outcome(a, &w.profile.with(deviant), 0);
    let got = payoff(&play, phi);
    let baseline = PayoffProfile::new(vec![true; 3]);
    if got.to_string() != "010" || prefers(1, &baseline, &got) {
        return Err(format!("deviation s0→s2 gives payoff {got}"));
    }
    match verify_se(a, phi, &w.profile, 0).map_err(|e| e.to_string())? {
        Verification::Secure { .. } => Ok(format!(
            "cycle {:?}, deviation s0→s2 punished with payoff {got}, verify_se secure",
            cycle.iter().map(|&s| a.name(s)).collect::<Vec<_>>()
        )),
        Verification::Deviation(d) => Err(format!("verify_se: player {} improves to {}", d.player, d.achievable)),
    }
}

fn closure_identities() -> Outcome {
    let mut rng = rng(0x1d);
    let mut failures = 0;
    for _ in 0..LASSO_INSTANCES {
        let n = rng.gen_range(1..=8);
        let a = random_arena(&mut rng, n, 1);
        let l = random_lasso(&mut rng, &a);
        let b1 = random_set(&mut rng, n, 0.4);
        let b2 = random_set(&mut rng, n, 0.4);
        let colours: Vec<u64> = (0..n).map(|_| rng.gen_range(0..6)).collect();
        let sat = |e: ObjectiveExpr| satisfies(&a, &l, &e).unwrap();
        let union: Vec<StateId> = b1.iter().chain(&b2).copied().collect();
        let ok = sat(ObjectiveExpr::not(Objective::buchi(b1.clone()))) == sat(Objective::co_buchi(b1.clone()).into())
            && sat(ObjectiveExpr::or([
                Objective::buchi(b1.clone()),
                Objective::buchi(b2.clone()),
            ])) == sat(Objective::buchi(union.clone()).into())
            && sat(ObjectiveExpr::and([
                Objective::co_buchi(b1.clone()),
                Objective::co_buchi(b2.clone()),
            ])) == sat(Objective::co_buchi(union).into())
            && sat(ObjectiveExpr::not(Objective::Parity(colours.clone())))
                == sat(Objective::Parity(colours.iter().map(|c| c + 1).collect()).into());
        if !ok {
            failures += 1;
        }
    }
    if failures == 0 {
        Ok(format!("{LASSO_INSTANCES} instances, 0 failures"))
    } else {
        Err(format!("{failures} of {LASSO_INSTANCES} instances fail"))
    }
}

/// A random objective built from the profile: one objective, or a small
/// Boolean combination of two.
fn random_expr(rng: &mut impl Rng, phi: &[Objective]) -> ObjectiveExpr {
    let j = phi.choose(rng).unwrap().clone();
    let k = phi.choose(rng).unwrap().clone();
    match rng.gen_range(0..4) {
        0 => j.into(),
        1 => ObjectiveExpr::not(j),
        2 => ObjectiveExpr::and([j, k]),
        _ => ObjectiveExpr::or([ObjectiveExpr::from(j), ObjectiveExpr::not(k)]),
    }
}

fn determinacy() -> Outcome {
    let mut rng = rng(0xde7);
    for game in 0..DETERMINACY_GAMES {
        let n = rng.gen_range(1..=8);
        let players = rng.gen_range(2..=3);
        let a = random_arena(&mut rng, n, players);
        let phi = random_profile(&mut rng, n, players, &KINDS);
        let p = random_coalition(&mut rng, players);
        let rest: Vec<usize> = (1..=players).filter(|x| !p.contains(x)).collect();
        let e = random_expr(&mut rng, &phi);
        let mine = coalition_region(&a, &p, &e).map_err(|err| err.to_string())?;
        let theirs = coalition_region(&a, &rest, &ObjectiveExpr::not(e)).map_err(|err| err.to_string())?;
        let overlap = mine.as_bitset().intersection(theirs.as_bitset()).count();
        if overlap != 0 || mine.len() + theirs.len() != n {
            return Err(format!(
                "game {game}: {} and {} do not partition the {n} states",
                mine.display(&a),
                theirs.display(&a)
            ));
        }
    }
    Ok(format!("{DETERMINACY_GAMES} games, regions partition S in every case"))
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = rng(0x0c1e);
    let (mut regions, mut lassos, mut positive, mut negative) = (0, 0, 0, 0);
    for game in 0..ORACLE_GAMES {
        let n = rng.gen_range(1..=6);
        let players = rng.gen_range(2..=3);
        let a = random_arena(&mut rng, n, players);
        let phi = random_profile(&mut rng, n, players, &KINDS);
        let fail = |what: String| Err(format!("game {game}: {what}"));

        // single parity-class objectives are positionally determined, so a
        // memory bound of 2 is exact for them
        let p = random_coalition(&mut rng, players);
        let j = phi.choose(&mut rng).unwrap().clone();
        let e: ObjectiveExpr = if rng.gen_bool(0.5) {
            j.into()
        } else {
            ObjectiveExpr::not(j)
        };
        let fast = coalition_region(&a, &p, &e).map_err(|err| err.to_string())?;
        let slow = brute_region(&a, &p, &e, 2).map_err(|err| err.to_string())?;
        if fast.states() != slow.states() {
            return fail(format!(
                "<<{p:?}>> region {} but brute force {}",
                fast.display(&a),
                slow.display(&a)
            ));
        }
        regions += 1;

        let e = random_expr(&mut rng, &phi);
        let fast = solve_cooperative(&a, &e).map_err(|err| err.to_string())?;
        let slow = lasso_region(&a, &e).map_err(|err| err.to_string())?;
        if fast.states() != slow.states() {
            return fail(format!(
                "cooperative {} but lassos {}",
                fast.display(&a),
                slow.display(&a)
            ));
        }
        lassos += 1;

        let s = rng.gen_range(0..n);
        for v in PayoffProfile::all(players) {
            let v = Constraint::new(v.bits().to_vec());
            let se = compute_se_v(&a, &phi, &v).map_err(|err| err.to_string())?;
            if se.contains(s) {
                let w = build_witness(&a, &phi, a.name(s), &v).map_err(|err| format!("game {game}: {err}"))?;
                if payoff(&w.outcome, &phi) != v.as_payoff() || w.outcome.start() != s {
                    return fail(format!("witness for {v} has outcome payoff {}", w.payoff));
                }
                match verify_se(&a, &phi, &w.profile, s).map_err(|err| err.to_string())? {
                    Verification::Secure { .. } => positive += 1,
                    Verification::Deviation(d) => {
                        return fail(format!(
                            "witness for {v} at {}: player {} deviates",
                            a.name(s),
                            d.player
                        ))
                    }
                }
            } else {
                match enumerate_bounded_se(&a, &phi, s, &v, 2).map_err(|err| format!("game {game}: {err}"))? {
                    BoundedSearch::NoneWithinBound => negative += 1,
                    BoundedSearch::Found(_) => {
                        return fail(format!(
                            "bounded search finds an SE for {v} at {} outside SE_v",
                            a.name(s)
                        ))
                    }
                }
            }
        }
    }
    let elapsed = t.elapsed();
    if elapsed >= ORACLE_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{ORACLE_GAMES} games: {regions} brute regions, {lassos} lasso regions, {positive} witnesses verified, \
         {negative} bounded searches empty, 0 discrepancies, {elapsed:?} < {ORACLE_LIMIT:?}"
    ))
}

fn encoding_coherence() -> Outcome {
    let mut rng = rng(0x57);
    let cfg = SolverConfig::default();
    for game in 0..ENCODING_GAMES {
        let n = rng.gen_range(1..=8);
        let players = rng.gen_range(2..=3);
        let a = random_arena(&mut rng, n, players);
        let phi = random_profile(&mut rng, n, players, &[Kind::Buchi]);
        let v = Constraint::new((0..players).map(|_| rng.gen_bool(0.5)).collect());
        let i = rng.gen_range(1..=players);
        let others: Vec<usize> = (1..=players).filter(|&p| p != i).collect();
        let guard = deviation_guard(&phi, &v, i);
        let streett = coalition_region_with(&a, &others, &guard, Route::Streett, &cfg).map_err(|e| e.to_string())?;
        let muller = coalition_region_with(&a, &others, &guard, Route::Muller, &cfg).map_err(|e| e.to_string())?;
        if streett.states() != muller.states() {
            return Err(format!(
                "game {game}, v = {v}, player {i}: Streett {} vs Muller {}",
                streett.display(&a),
                muller.display(&a)
            ));
        }
    }
    Ok(format!("{ENCODING_GAMES} guards, Streett and Muller routes agree"))
}

fn parity_identity() -> Outcome {
    let mut rng = rng(0x7);
    let v = Constraint::parse("10", 2).unwrap();
    for game in 0..PARITY_GAMES {
        let n = rng.gen_range(1..=8);
        let a = random_arena(&mut rng, n, 2);
        let p1 = random_objective(&mut rng, n, Kind::Parity);
        let p2 = random_objective(&mut rng, n, Kind::Parity);
        let se = compute_se_v(&a, &[p1.clone(), p2.negate()], &v).map_err(|e| e.to_string())?;
        let win = coalition_region(&a, &[1], &ObjectiveExpr::and([p1, p2])).map_err(|e| e.to_string())?;
        if se.states() != win.states() {
            return Err(format!(
                "game {game}: SE_(1,0) {} vs <<1>> {}",
                se.display(&a),
                win.display(&a)
            ));
        }
    }
    Ok(format!("{PARITY_GAMES} games, SE_(1,0) = <<1>>(φ1 ∩ φ2) in every case"))
}

fn parity_benchmark() -> Outcome {
    let mut rng = rng(0xbe);
    let a = random_arena(&mut rng, BENCH_STATES, 2);
    let colours = Objective::Parity((0..BENCH_STATES).map(|_| rng.gen_range(0..8)).collect());
    let t = Instant::now();
    let r = coalition_region(&a, &[1], &colours.into()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    if r.provenance() != Route::Parity {
        return Err(format!("solved through {}", r.provenance()));
    }
    if elapsed >= BENCH_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{BENCH_STATES} states, {} won by player 1, {elapsed:?} < {BENCH_LIMIT:?}",
        r.len()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked example", worked_example),
        ("2 witness behaviour", witness_behaviour),
        ("3 closure identities", closure_identities),
        ("4 determinacy", determinacy),
        ("5 oracle equivalence", oracle_equivalence),
        ("6 encoding coherence", encoding_coherence),
        ("7 parity (1,0) identity", parity_identity),
        ("smoke parity benchmark", parity_benchmark),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
