//! Winning regions of coalition games and of the cooperative (one-player)
//! game.
//!
//! A coalition `P` of a multi-player arena plays against everyone else: the
//! states of `P` belong to the protagonist, the rest to the antagonist. An
//! objective expression is sent to the cheapest applicable solver:
//!
//! 1. a single Büchi, co-Büchi or parity objective (after the closure laws)
//!    goes to Zielonka's parity algorithm;
//! 2. a single Streett/Rabin objective, or an expression whose normal form
//!    is one, goes to the Streett solver;
//! 3. anything else goes through the latest appearance record to parity.

pub(crate) mod cooperative;
pub(crate) mod graph;
pub(crate) mod muller;
pub(crate) mod parity;
pub(crate) mod streett;

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arena::{ArenaError, GameArena, Lasso, Player, StateId};
use crate::objectives::cond::Cond;
use crate::objectives::{flatten_same_class, to_muller, Objective, ObjectiveError, ObjectiveExpr};

use cooperative::Cooperative;
use graph::{Graph, Side, TwoPlayer, NO_MOVE};
use muller::ClassCondition;

const NORMAL_FORM_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("solver exceeded its budget of {budget} product states")]
    MemoryBudgetExceeded { budget: usize },
    #[error("player {0} is out of range")]
    PlayerOutOfRange(Player),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Upper bound on product states (LAR) and on explored components
    /// (generic one-player search).
    pub budget: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: 1_000_000 }
    }
}

/// Which solver produced a region, or which one to force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Auto,
    Attractor,
    Parity,
    Streett,
    Rabin,
    Muller,
    Cooperative,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Auto => "auto",
            Route::Attractor => "attractor",
            Route::Parity => "parity",
            Route::Streett => "streett",
            Route::Rabin => "rabin",
            Route::Muller => "muller",
            Route::Cooperative => "cooperative",
        })
    }
}

/// A set of arena states together with the solver that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    states: FixedBitSet,
    provenance: Route,
}

impl Region {
    pub(crate) fn new(states: FixedBitSet, provenance: Route) -> Region {
        Region { states, provenance }
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.states.contains(s)
    }

    /// Members in increasing index order, which is the arena's input order.
    pub fn states(&self) -> Vec<StateId> {
        self.states.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.states.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_clear()
    }

    pub fn provenance(&self) -> Route {
        self.provenance
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.states
    }

    pub fn names<'a>(&self, arena: &'a GameArena) -> Vec<&'a str> {
        self.states.ones().map(|s| arena.name(s)).collect()
    }

    /// `{a, b, c}` using the arena's state names.
    pub fn display(&self, arena: &GameArena) -> String {
        format!("{{{}}}", self.names(arena).join(", "))
    }
}

/// The two-player view of a multi-player arena: coalition against the rest.
#[derive(Debug, Clone)]
pub struct CoalitionGame<'a> {
    pub arena: &'a GameArena,
    pub coalition: BTreeSet<Player>,
    pub objective: ObjectiveExpr,
}

impl<'a> CoalitionGame<'a> {
    pub fn new(
        arena: &'a GameArena,
        coalition: impl IntoIterator<Item = Player>,
        objective: impl Into<ObjectiveExpr>,
    ) -> Result<Self, SolveError> {
        let coalition: BTreeSet<Player> = coalition.into_iter().collect();
        if let Some(&p) = coalition.iter().find(|&&p| p == 0 || p > arena.players()) {
            return Err(SolveError::PlayerOutOfRange(p));
        }
        let objective = objective.into();
        objective.check(arena.num_states())?;
        Ok(CoalitionGame {
            arena,
            coalition,
            objective,
        })
    }

    pub fn protagonist_states(&self) -> Vec<StateId> {
        self.pro_mask().ones().collect()
    }

    fn pro_mask(&self) -> FixedBitSet {
        let mut pro = FixedBitSet::with_capacity(self.arena.num_states());
        for s in self.arena.states() {
            if self.coalition.contains(&self.arena.owner(s)) {
                pro.insert(s);
            }
        }
        pro
    }

    fn two_player(&self) -> TwoPlayer {
        TwoPlayer {
            graph: Graph::from_arena(self.arena),
            pro: self.pro_mask(),
        }
    }
}

fn mask_of(n: usize, states: impl IntoIterator<Item = StateId>) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(n);
    for s in states {
        m.insert(s);
    }
    m
}

/// Least set from which the coalition can force a visit to `target`.
pub fn attractor(g: &CoalitionGame<'_>, target: &[StateId]) -> Region {
    let game = g.two_player();
    let n = game.len();
    let target = mask_of(n, target.iter().copied().filter(|&s| s < n));
    Region::new(
        game.attractor(&game.graph.full(), Side::Pro, &target, None),
        Route::Attractor,
    )
}

/// Priorities for an objective that is parity-like after flattening.
fn parity_colours(o: &Objective, n: usize) -> Option<Vec<u64>> {
    match o {
        Objective::Buchi(b) => Some((0..n).map(|s| if b.contains(&s) { 0 } else { 1 }).collect()),
        Objective::CoBuchi(c) => Some((0..n).map(|s| if c.contains(&s) { 1 } else { 2 }).collect()),
        Objective::Parity(p) => Some(p.clone()),
        _ => None,
    }
}

/// Winning region of a game whose objective flattens to a Büchi, co-Büchi or
/// parity objective. Büchi and co-Büchi are two-colour parity games.
pub fn solve_parity(g: &CoalitionGame<'_>) -> Result<Region, SolveError> {
    let n = g.arena.num_states();
    let colours = flatten_same_class(&g.objective)
        .and_then(|o| parity_colours(&o, n))
        .ok_or_else(|| ObjectiveError::ShapeMismatch("not a parity-like objective".into()))?;
    let sol = parity::solve(&g.two_player(), &colours);
    Ok(Region::new(sol.win[0].clone(), Route::Parity))
}

/// Winning region via the latest appearance record. A plain Muller objective
/// keeps one record entry per state its formula mentions; any other
/// expression groups states by how the leaves see them.
pub fn solve_muller(g: &CoalitionGame<'_>, cfg: &SolverConfig) -> Result<Region, SolveError> {
    let game = g.two_player();
    let sol = lar_solve(&game, &g.objective, g.arena.num_states(), cfg)?;
    Ok(Region::new(sol.region, Route::Muller))
}

/// Colour classes for the LAR: `class_of` per state plus one representative
/// state per class.
fn lar_classes(e: &ObjectiveExpr, n: usize) -> (Vec<Option<usize>>, Vec<StateId>) {
    if let ObjectiveExpr::Leaf(Objective::Muller(f)) = e {
        let atoms: BTreeSet<StateId> = f.atoms().into_iter().collect();
        let mut class_of = vec![None; n];
        for (c, &s) in atoms.iter().enumerate() {
            class_of[s] = Some(c);
        }
        return (class_of, atoms.into_iter().collect());
    }
    let leaves = e.leaves();
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut reps = Vec::new();
    let mut class_of = vec![None; n];
    for s in 0..n {
        let mut sig = Vec::new();
        let mut cares = false;
        let mut bit = |b: bool, sig: &mut Vec<u64>| {
            cares |= b;
            sig.push(u64::from(b));
        };
        for leaf in &leaves {
            match leaf {
                Objective::Buchi(x) | Objective::CoBuchi(x) => bit(x.contains(&s), &mut sig),
                Objective::Parity(p) => {
                    bit(true, &mut sig);
                    sig.push(p[s]);
                }
                Objective::Streett(pairs) | Objective::Rabin(pairs) => {
                    for pr in pairs {
                        bit(pr.f.contains(&s), &mut sig);
                        bit(pr.g.contains(&s), &mut sig);
                    }
                }
                Objective::Muller(f) => {
                    let here = f.atoms().contains(&s);
                    bit(here, &mut sig);
                    if here {
                        sig.push(s as u64);
                    }
                }
            }
        }
        if !cares {
            continue;
        }
        let c = match seen.iter().position(|x| *x == sig) {
            Some(c) => c,
            None => {
                seen.push(sig);
                reps.push(s);
                seen.len() - 1
            }
        };
        class_of[s] = Some(c);
    }
    (class_of, reps)
}

fn lar_solve(
    game: &TwoPlayer,
    e: &ObjectiveExpr,
    n: usize,
    cfg: &SolverConfig,
) -> Result<muller::MullerSolution, SolveError> {
    let (class_of, reps) = lar_classes(e, n);
    let accept = |present: &[bool]| {
        let inf = mask_of(n, reps.iter().zip(present).filter(|(_, &p)| p).map(|(&s, _)| s));
        e.holds(&inf)
    };
    let cond = ClassCondition {
        class_of,
        classes: reps.len(),
        accept: &accept,
    };
    muller::solve(&game.graph, &game.pro, &cond, cfg.budget)
}

/// `⟨⟨P⟩⟩(e)` with the default configuration and automatic dispatch.
pub fn coalition_region(a: &GameArena, coalition: &[Player], e: &ObjectiveExpr) -> Result<Region, SolveError> {
    coalition_region_with(a, coalition, e, Route::Auto, &SolverConfig::default())
}

/// `⟨⟨P⟩⟩(e)` through a chosen route. Forcing `Streett` or `Rabin` fails
/// with a shape error when the expression has no such encoding; forcing
/// `Muller` translates the expression to a single Muller formula first.
pub fn coalition_region_with(
    a: &GameArena,
    coalition: &[Player],
    e: &ObjectiveExpr,
    route: Route,
    cfg: &SolverConfig,
) -> Result<Region, SolveError> {
    let g = CoalitionGame::new(a, coalition.iter().copied(), e.clone())?;
    let game = g.two_player();
    let n = a.num_states();
    let streett = |pairs: Vec<(FixedBitSet, FixedBitSet)>, side: Side, route: Route| {
        let [s, r] = streett::solve(&game, &pairs, side);
        Region::new(if side == Side::Pro { s } else { r }, route)
    };
    match route {
        Route::Auto => {
            if let Some(o) = flatten_same_class(e) {
                if let Some(colours) = parity_colours(&o, n) {
                    return Ok(Region::new(
                        parity::solve(&game, &colours).win[0].clone(),
                        Route::Parity,
                    ));
                }
            }
            let cond = Cond::from_expr(e, n);
            if let Some(pairs) = cond.as_streett(n, NORMAL_FORM_LIMIT) {
                return Ok(streett(pairs, Side::Pro, Route::Streett));
            }
            // a Rabin condition for the coalition is a Streett one for the rest
            if let Some(pairs) = cond.as_rabin(n, NORMAL_FORM_LIMIT) {
                return Ok(streett(pairs, Side::Anti, Route::Rabin));
            }
            Ok(Region::new(lar_solve(&game, e, n, cfg)?.region, Route::Muller))
        }
        Route::Parity => solve_parity(&g),
        Route::Streett => Cond::from_expr(e, n)
            .as_streett(n, NORMAL_FORM_LIMIT)
            .map(|p| streett(p, Side::Pro, Route::Streett))
            .ok_or_else(|| ObjectiveError::ShapeMismatch("no Streett encoding".into()).into()),
        Route::Rabin => Cond::from_expr(e, n)
            .as_rabin(n, NORMAL_FORM_LIMIT)
            .map(|p| streett(p, Side::Anti, Route::Rabin))
            .ok_or_else(|| ObjectiveError::ShapeMismatch("no Rabin encoding".into()).into()),
        Route::Muller => {
            let m: ObjectiveExpr = to_muller(e, n).into();
            Ok(Region::new(lar_solve(&game, &m, n, cfg)?.region, Route::Muller))
        }
        Route::Attractor | Route::Cooperative => {
            Err(ObjectiveError::ShapeMismatch(format!("{route} is not a coalition route")).into())
        }
    }
}

/// A finite-memory strategy of the protagonist, as tables indexed by
/// `memory * states + state`. `moves` is `NO_MOVE` at antagonist states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MachineTable {
    pub states: usize,
    pub memories: usize,
    pub initial: usize,
    pub update: Vec<usize>,
    pub moves: Vec<usize>,
}

/// Winning region of the coalition together with a strategy that wins from
/// every state of it. Parity-like objectives get positional strategies,
/// everything else a LAR machine.
pub(crate) fn coalition_strategy(
    a: &GameArena,
    coalition: &[Player],
    e: &ObjectiveExpr,
    cfg: &SolverConfig,
) -> Result<(FixedBitSet, MachineTable), SolveError> {
    let g = CoalitionGame::new(a, coalition.iter().copied(), e.clone())?;
    let game = g.two_player();
    let n = a.num_states();
    if let Some(colours) = flatten_same_class(e).and_then(|o| parity_colours(&o, n)) {
        let sol = parity::solve(&game, &colours);
        let moves = (0..n)
            .map(|s| {
                if !game.pro.contains(s) {
                    NO_MOVE
                } else if sol.win[0].contains(s) && sol.strategy[s] != NO_MOVE {
                    sol.strategy[s]
                } else {
                    game.graph.succ[s][0]
                }
            })
            .collect();
        let table = MachineTable {
            states: n,
            memories: 1,
            initial: 0,
            update: vec![0; n],
            moves,
        };
        return Ok((sol.win[0].clone(), table));
    }
    let sol = lar_solve(&game, e, n, cfg)?;
    let mut table = sol.machine;
    for s in 0..n {
        if !game.pro.contains(s) {
            for m in 0..table.memories {
                table.moves[m * n + s] = NO_MOVE;
            }
        }
    }
    Ok((sol.region, table))
}

impl MachineTable {
    /// Plays `self` until the play enters `region`, then switches for good
    /// to `then`, started afresh at the entry state.
    pub fn switch_into(&self, region: &FixedBitSet, then: &MachineTable) -> MachineTable {
        let n = self.states;
        let k = self.memories;
        let memories = k + then.memories;
        let mut update = vec![0; memories * n];
        let mut moves = vec![NO_MOVE; memories * n];
        for m in 0..k {
            for x in 0..n {
                update[m * n + x] = if region.contains(x) {
                    k + then.update[then.initial * n + x]
                } else {
                    self.update[m * n + x]
                };
                moves[m * n + x] = self.moves[m * n + x];
            }
        }
        for m in 0..then.memories {
            for x in 0..n {
                update[(k + m) * n + x] = k + then.update[m * n + x];
                moves[(k + m) * n + x] = then.moves[m * n + x];
            }
        }
        MachineTable {
            states: n,
            memories,
            initial: self.initial,
            update,
            moves,
        }
    }
}

/// Result of a one-player analysis restricted to `within`.
pub(crate) struct CooperativeSolution {
    pub region: FixedBitSet,
    pub good: Vec<Vec<usize>>,
}

pub(crate) fn cooperative_on(
    graph: &Graph,
    within: &FixedBitSet,
    cond: &Cond,
    cfg: &SolverConfig,
) -> Result<CooperativeSolution, SolveError> {
    let c = Cooperative {
        graph,
        within,
        budget: cfg.budget,
    };
    let good = c.good_components(cond)?;
    Ok(CooperativeSolution {
        region: c.region(&good),
        good,
    })
}

pub(crate) fn cooperative_lasso_on(
    graph: &Graph,
    within: &FixedBitSet,
    good: &[Vec<usize>],
    from: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    Cooperative {
        graph,
        within,
        budget: 0,
    }
    .lasso(from, good)
}

/// `⟨⟨[1,n]⟩⟩(e)`: states from which some play satisfies `e`.
pub fn solve_cooperative(a: &GameArena, e: &ObjectiveExpr) -> Result<Region, SolveError> {
    solve_cooperative_with(a, e, &SolverConfig::default())
}

pub fn solve_cooperative_with(a: &GameArena, e: &ObjectiveExpr, cfg: &SolverConfig) -> Result<Region, SolveError> {
    e.check(a.num_states())?;
    let graph = Graph::from_arena(a);
    let sol = cooperative_on(&graph, &graph.full(), &Cond::from_expr(e, a.num_states()), cfg)?;
    Ok(Region::new(sol.region, Route::Cooperative))
}

/// A play from `s` satisfying `e`, if there is one.
pub fn cooperative_lasso(
    a: &GameArena,
    e: &ObjectiveExpr,
    s: StateId,
    cfg: &SolverConfig,
) -> Result<Option<Lasso>, SolveError> {
    e.check(a.num_states())?;
    if s >= a.num_states() {
        return Err(ObjectiveError::ForeignState(s).into());
    }
    let graph = Graph::from_arena(a);
    let full = graph.full();
    let sol = cooperative_on(&graph, &full, &Cond::from_expr(e, a.num_states()), cfg)?;
    match cooperative_lasso_on(&graph, &full, &sol.good, s) {
        Some((stem, cycle)) => Ok(Some(Lasso::new(a, stem, cycle)?)),
        None => Ok(None),
    }
}
