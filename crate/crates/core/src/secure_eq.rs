//! Secure equilibria with a prescribed payoff profile.
//!
//! Given objectives `φ_1..φ_n` and a constraint `v ∈ {0,1}^n` with winners
//! `W` and losers `L`, write `φ_W = ⋂_{j∈W} φ_j` and `φ_L = ⋃_{j∈L} φ_j`.
//! A state admits a secure equilibrium with payoff `v` iff some play from it
//! stays inside
//!
//! ```text
//! A_v = ⋂_i ⟨⟨I∖{i}⟩⟩(guard_i)
//!   guard_i = φ_W ∪ φ_L ∪ ¬φ_i      (i ∈ W)
//!   guard_i = (φ_W ∪ φ_L) ∩ ¬φ_i    (i ∈ L)
//! ```
//!
//! and satisfies `φ_W ∩ ¬φ_L`. The witness follows such a play and, as soon
//! as the owner of a state leaves it, lets everyone else switch for good to
//! a strategy winning `guard_i` against the deviator. A winning deviator is
//! made to lose outright wherever the others can force that.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arena::{ArenaError, GameArena, Lasso, Player, StateId};
use crate::objectives::cond::Cond;
use crate::objectives::{Objective, ObjectiveError, ObjectiveExpr};
use crate::zero_sum::graph::{Graph, NO_MOVE};
use crate::zero_sum::{self, coalition_region_with, MachineTable, Region, Route, SolveError, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("constraint has {got} bits, game has {expected} players")]
    ConstraintLength { expected: usize, got: usize },
    #[error("constraint `{0}` is not a bit string")]
    InvalidConstraint(String),
    #[error("{got} objectives for {expected} players")]
    ProfileLength { expected: usize, got: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("no secure equilibrium with payoff {constraint} from `{state}`")]
    NoWitness { state: String, constraint: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// One bit per player; bit `i` (1-based) is whether player `i` wins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PayoffProfile {
    bits: Vec<bool>,
}

impl PayoffProfile {
    pub fn new(bits: Vec<bool>) -> Self {
        PayoffProfile { bits }
    }

    /// All `2^n` profiles, in binary counting order with player 1 as the
    /// most significant bit.
    pub fn all(n: usize) -> impl Iterator<Item = PayoffProfile> {
        (0u64..1 << n).map(move |x| PayoffProfile::new((0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect()))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, player: Player) -> bool {
        self.bits[player - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for PayoffProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for PayoffProfile {
    type Err = SeError;

    fn from_str(s: &str) -> Result<Self, SeError> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(SeError::InvalidConstraint(s.to_string()));
        }
        Ok(PayoffProfile::new(s.chars().map(|c| c == '1').collect()))
    }
}

/// The payoff a secure equilibrium must achieve, written as a bit string
/// with player 1 leftmost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    bits: Vec<bool>,
}

impl Constraint {
    pub fn new(bits: Vec<bool>) -> Self {
        Constraint { bits }
    }

    /// Parses a bit string for an `n`-player game.
    pub fn parse(text: &str, n: usize) -> Result<Self, SeError> {
        let p: PayoffProfile = text.parse()?;
        if p.len() != n {
            return Err(SeError::ConstraintLength {
                expected: n,
                got: p.len(),
            });
        }
        Ok(Constraint { bits: p.bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn wins(&self, player: Player) -> bool {
        self.bits[player - 1]
    }

    /// `W`, in increasing order.
    pub fn winners(&self) -> Vec<Player> {
        (1..=self.len()).filter(|&i| self.wins(i)).collect()
    }

    /// `L`, in increasing order.
    pub fn losers(&self) -> Vec<Player> {
        (1..=self.len()).filter(|&i| !self.wins(i)).collect()
    }

    pub fn as_payoff(&self) -> PayoffProfile {
        PayoffProfile::new(self.bits.clone())
    }
}

impl From<PayoffProfile> for Constraint {
    fn from(p: PayoffProfile) -> Self {
        Constraint { bits: p.bits }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_payoff().fmt(f)
    }
}

/// `v ≺_i v'`: player `i` strictly prefers `v'` to `v`. Either `i` gains,
/// or `i` keeps its payoff while nobody gains and somebody loses.
pub fn prefers(i: Player, v: &PayoffProfile, v2: &PayoffProfile) -> bool {
    let (a, b) = (v.get(i), v2.get(i));
    if a != b {
        return !a && b;
    }
    let pairs = || v.bits.iter().zip(&v2.bits);
    pairs().all(|(x, y)| x >= y) && pairs().any(|(x, y)| x > y)
}

/// A finite-memory strategy: memory is updated on every state read, and the
/// move at an owned state depends on the memory after reading it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreStrategy {
    player: Player,
    states: usize,
    memory_size: usize,
    initial: usize,
    update: Vec<usize>,
    moves: Vec<Option<StateId>>,
}

impl MooreStrategy {
    /// `update` and `moves` are indexed by `memory * |S| + state`. A move is
    /// required exactly at the player's own states and must follow an edge.
    pub fn new(
        arena: &GameArena,
        player: Player,
        memory_size: usize,
        initial: usize,
        update: Vec<usize>,
        moves: Vec<Option<StateId>>,
    ) -> Result<Self, SeError> {
        let n = arena.num_states();
        let bad = |msg: String| Err(SeError::InvalidStrategy(msg));
        if player == 0 || player > arena.players() {
            return bad(format!("player {player} out of range"));
        }
        if memory_size == 0 || initial >= memory_size {
            return bad(format!("initial memory {initial} of {memory_size}"));
        }
        if update.len() != memory_size * n || moves.len() != memory_size * n {
            return bad("table size does not match memory × states".into());
        }
        if let Some(&m) = update.iter().find(|&&m| m >= memory_size) {
            return bad(format!("update to unknown memory {m}"));
        }
        for m in 0..memory_size {
            for s in 0..n {
                match (arena.owner(s) == player, moves[m * n + s]) {
                    (true, Some(t)) if t < n && arena.has_edge(s, t) => {}
                    (true, Some(t)) => return bad(format!("move {} → #{t} is not an edge", arena.name(s))),
                    (true, None) => return bad(format!("no move at {} in memory {m}", arena.name(s))),
                    (false, Some(_)) => {
                        return bad(format!("player {player} moves at foreign state {}", arena.name(s)))
                    }
                    (false, None) => {}
                }
            }
        }
        Ok(MooreStrategy {
            player,
            states: n,
            memory_size,
            initial,
            update,
            moves,
        })
    }

    /// A memoryless strategy.
    pub fn positional(arena: &GameArena, player: Player, choice: impl Fn(StateId) -> StateId) -> Result<Self, SeError> {
        let n = arena.num_states();
        let moves = (0..n).map(|s| (arena.owner(s) == player).then(|| choice(s))).collect();
        MooreStrategy::new(arena, player, 1, 0, vec![0; n], moves)
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn memory_size(&self) -> usize {
        self.memory_size
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn update(&self, m: usize, s: StateId) -> usize {
        self.update[m * self.states + s]
    }

    /// The successor chosen at owned state `s` in memory `m`.
    pub fn next_state(&self, m: usize, s: StateId) -> Option<StateId> {
        self.moves[m * self.states + s]
    }

    /// Memory after reading the first state of a play.
    pub fn start(&self, s: StateId) -> usize {
        self.update(self.initial, s)
    }
}

/// One strategy per player, indexed by player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    strategies: Vec<MooreStrategy>,
}

impl StrategyProfile {
    pub fn new(arena: &GameArena, mut strategies: Vec<MooreStrategy>) -> Result<Self, SeError> {
        strategies.sort_by_key(|s| s.player);
        let players: Vec<Player> = strategies.iter().map(|s| s.player).collect();
        if players != (1..=arena.players()).collect::<Vec<_>>() {
            return Err(SeError::InvalidStrategy(format!(
                "profile covers players {players:?}, expected 1..={}",
                arena.players()
            )));
        }
        if strategies.iter().any(|s| s.states != arena.num_states()) {
            return Err(SeError::InvalidStrategy("strategy built for another arena".into()));
        }
        Ok(StrategyProfile { strategies })
    }

    pub fn get(&self, player: Player) -> &MooreStrategy {
        &self.strategies[player - 1]
    }

    pub fn strategies(&self) -> &[MooreStrategy] {
        &self.strategies
    }

    /// The same profile with player `i`'s strategy replaced.
    pub fn with(&self, strategy: MooreStrategy) -> StrategyProfile {
        let mut strategies = self.strategies.clone();
        let i = strategy.player;
        strategies[i - 1] = strategy;
        StrategyProfile { strategies }
    }
}

/// The unique play from `s` when everyone follows `profile`.
pub fn outcome(a: &GameArena, profile: &StrategyProfile, s: StateId) -> Lasso {
    let mut mem: Vec<usize> = profile.strategies.iter().map(|st| st.start(s)).collect();
    let mut seen: HashMap<(StateId, Vec<usize>), usize> = HashMap::new();
    let mut word = Vec::new();
    let mut cur = s;
    loop {
        if let Some(&k) = seen.get(&(cur, mem.clone())) {
            let cycle = word.split_off(k);
            return Lasso { stem: word, cycle };
        }
        seen.insert((cur, mem.clone()), word.len());
        word.push(cur);
        let owner = a.owner(cur);
        let next = profile.strategies[owner - 1]
            .next_state(mem[owner - 1], cur)
            .expect("validated strategies move at owned states");
        for (m, st) in mem.iter_mut().zip(&profile.strategies) {
            *m = st.update(*m, next);
        }
        cur = next;
    }
}

/// Bit `i` is whether the play satisfies `φ_i`.
pub fn payoff(lasso: &Lasso, objectives: &[Objective]) -> PayoffProfile {
    let inf = lasso.inf_set();
    PayoffProfile::new(objectives.iter().map(|o| o.holds(&inf)).collect())
}

fn check_profile(a: &GameArena, objectives: &[Objective], v: &Constraint) -> Result<(), SeError> {
    if objectives.len() != a.players() {
        return Err(SeError::ProfileLength {
            expected: a.players(),
            got: objectives.len(),
        });
    }
    if v.len() != a.players() {
        return Err(SeError::ConstraintLength {
            expected: a.players(),
            got: v.len(),
        });
    }
    for o in objectives {
        o.check(a.num_states())?;
    }
    Ok(())
}

fn leaf(objectives: &[Objective], j: Player) -> ObjectiveExpr {
    objectives[j - 1].clone().into()
}

/// `⋂_{j∈W} φ_j`; all plays when `W` is empty.
pub fn winners_objective(objectives: &[Objective], v: &Constraint) -> ObjectiveExpr {
    let w = v.winners();
    match w.as_slice() {
        [j] => leaf(objectives, *j),
        _ => ObjectiveExpr::And(w.iter().map(|&j| leaf(objectives, j)).collect()),
    }
}

/// `⋃_{j∈L} φ_j`; no play when `L` is empty.
pub fn losers_objective(objectives: &[Objective], v: &Constraint) -> ObjectiveExpr {
    let l = v.losers();
    match l.as_slice() {
        [j] => leaf(objectives, *j),
        _ => ObjectiveExpr::Or(l.iter().map(|&j| leaf(objectives, j)).collect()),
    }
}

/// The objective the other players must enforce against player `i` so that
/// a deviation by `i` never pays off.
///
/// Empty unions are dropped, and for a loser `i` the term `φ_i` is dropped
/// from `φ_L`, since it is cancelled by `¬φ_i` anyway.
pub fn deviation_guard(objectives: &[Objective], v: &Constraint, i: Player) -> ObjectiveExpr {
    let phi_w = winners_objective(objectives, v);
    let not_i = ObjectiveExpr::not(leaf(objectives, i));
    if v.wins(i) {
        let mut parts = vec![phi_w];
        if !v.losers().is_empty() {
            parts.push(losers_objective(objectives, v));
        }
        parts.push(not_i);
        return ObjectiveExpr::Or(parts);
    }
    if v.winners().is_empty() {
        return not_i;
    }
    let others: Vec<Player> = v.losers().into_iter().filter(|&j| j != i).collect();
    let keep = if others.is_empty() {
        phi_w
    } else {
        let mut parts = vec![phi_w];
        parts.extend(others.iter().map(|&j| leaf(objectives, j)));
        ObjectiveExpr::Or(parts)
    };
    ObjectiveExpr::And(vec![keep, not_i])
}

fn everyone_but(n: usize, i: Player) -> Vec<Player> {
    (1..=n).filter(|&j| j != i).collect()
}

/// Step 1: `A_v`, the states from which every single deviation can be
/// answered.
pub fn compute_a_v(a: &GameArena, objectives: &[Objective], v: &Constraint) -> Result<Region, SeError> {
    compute_a_v_with(a, objectives, v, &SolverConfig::default())
}

pub fn compute_a_v_with(
    a: &GameArena,
    objectives: &[Objective],
    v: &Constraint,
    cfg: &SolverConfig,
) -> Result<Region, SeError> {
    check_profile(a, objectives, v)?;
    let n = a.players();
    let mut acc = FixedBitSet::with_capacity(a.num_states());
    acc.insert_range(..);
    for i in 1..=n {
        let g = deviation_guard(objectives, v, i);
        let r = coalition_region_with(a, &everyone_but(n, i), &g, Route::Auto, cfg)?;
        acc.intersect_with(r.as_bitset());
    }
    Ok(Region::new(acc, Route::Auto))
}

/// `φ_W ∩ ¬φ_L`: the plays with payoff exactly `v`.
pub fn exact_payoff_objective(objectives: &[Objective], v: &Constraint) -> ObjectiveExpr {
    ObjectiveExpr::And(vec![
        winners_objective(objectives, v),
        ObjectiveExpr::not(losers_objective(objectives, v)),
    ])
}

/// Both steps, with what the witness construction needs.
pub struct Analysis {
    pub a_v: Region,
    /// Dead-end-free core of `A_v`.
    pub core: Region,
    pub se_v: Region,
    graph: Graph,
    good: Vec<Vec<usize>>,
}

pub fn analyze(
    a: &GameArena,
    objectives: &[Objective],
    v: &Constraint,
    cfg: &SolverConfig,
) -> Result<Analysis, SeError> {
    let a_v = compute_a_v_with(a, objectives, v, cfg)?;
    let core = a.dead_end_free_core(a_v.as_bitset());
    let graph = Graph::from_arena(a);
    let target = Cond::from_expr(&exact_payoff_objective(objectives, v), a.num_states());
    let sol = zero_sum::cooperative_on(&graph, &core, &target, cfg)?;
    Ok(Analysis {
        a_v,
        core: Region::new(core, Route::Auto),
        se_v: Region::new(sol.region, Route::Cooperative),
        graph,
        good: sol.good,
    })
}

/// Step 2: `SE_v`, the states admitting a secure equilibrium with payoff `v`.
pub fn compute_se_v(a: &GameArena, objectives: &[Objective], v: &Constraint) -> Result<Region, SeError> {
    Ok(analyze(a, objectives, v, &SolverConfig::default())?.se_v)
}

fn state_named(a: &GameArena, s: &str) -> Result<StateId, SeError> {
    a.state_id(s).map_err(|_| SeError::UnknownState(s.to_string()))
}

/// Is there a secure equilibrium from `s` whose payoff profile is `v`?
pub fn decide_constrained_se(
    a: &GameArena,
    objectives: &[Objective],
    s: &str,
    v: &Constraint,
) -> Result<bool, SeError> {
    let s = state_named(a, s)?;
    Ok(compute_se_v(a, objectives, v)?.contains(s))
}

/// A witness profile with the facts used to build it.
#[derive(Debug, Clone)]
pub struct Witness {
    pub profile: StrategyProfile,
    /// The play the profile produces from the start state.
    pub outcome: Lasso,
    pub payoff: PayoffProfile,
    /// Memory of the retaliation strategy used against each player, before
    /// minimisation (index `i - 1`).
    pub retaliation_memory: Vec<usize>,
}

/// Builds a secure equilibrium from `s` with payoff `v`.
pub fn build_witness(a: &GameArena, objectives: &[Objective], s: &str, v: &Constraint) -> Result<Witness, SeError> {
    build_witness_with(a, objectives, s, v, &SolverConfig::default())
}

pub fn build_witness_with(
    a: &GameArena,
    objectives: &[Objective],
    s: &str,
    v: &Constraint,
    cfg: &SolverConfig,
) -> Result<Witness, SeError> {
    let start = state_named(a, s)?;
    let analysis = analyze(a, objectives, v, cfg)?;
    let no_witness = || SeError::NoWitness {
        state: s.to_string(),
        constraint: v.to_string(),
    };
    if !analysis.se_v.contains(start) {
        return Err(no_witness());
    }
    let (stem, cycle) =
        zero_sum::cooperative_lasso_on(&analysis.graph, analysis.core.as_bitset(), &analysis.good, start)
            .ok_or_else(no_witness)?;
    let n = a.players();
    let mut retaliation = Vec::with_capacity(n);
    for i in 1..=n {
        let g = deviation_guard(objectives, v, i);
        let coalition = everyone_but(n, i);
        let (region, mut table) = zero_sum::coalition_strategy(a, &coalition, &g, cfg)?;
        debug_assert!(analysis.a_v.as_bitset().is_subset(&region));
        if v.wins(i) {
            // where the deviator can be made to lose outright, do that
            let harsh = ObjectiveExpr::not(leaf(objectives, i));
            let (lose, punish) = zero_sum::coalition_strategy(a, &coalition, &harsh, cfg)?;
            table = table.switch_into(&lose, &punish);
        }
        retaliation.push(table);
    }
    let plan = Plan {
        arena: a,
        word: stem.iter().chain(&cycle).copied().collect(),
        loop_start: stem.len(),
        retaliation: &retaliation,
    };
    let strategies = (1..=n).map(|j| plan.machine(j)).collect::<Result<Vec<_>, _>>()?;
    let profile = StrategyProfile::new(a, strategies)?;
    let out = outcome(a, &profile, start);
    let pay = payoff(&out, objectives);
    debug_assert_eq!(pay, v.as_payoff());
    Ok(Witness {
        profile,
        outcome: out,
        payoff: pay,
        retaliation_memory: retaliation.iter().map(|t| t.memories).collect(),
    })
}

/// Memory of the supervisor each player runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Mode {
    /// Nothing read yet.
    Start,
    /// On the agreed play, at this position of `word`.
    Coop(usize),
    /// Retaliating against a deviator, with that strategy's memory.
    Punish(Player, usize),
    /// After one's own deviation, or off the agreed start: anything goes.
    Free,
}

struct Plan<'a> {
    arena: &'a GameArena,
    /// Stem followed by one round of the cycle.
    word: Vec<StateId>,
    loop_start: usize,
    retaliation: &'a [MachineTable],
}

impl Plan<'_> {
    fn next_pos(&self, p: usize) -> usize {
        if p + 1 < self.word.len() {
            p + 1
        } else {
            self.loop_start
        }
    }

    fn step(&self, j: Player, mode: Mode, x: StateId) -> Mode {
        let n = self.arena.num_states();
        match mode {
            Mode::Start if x == self.word[0] => Mode::Coop(0),
            Mode::Start | Mode::Free => Mode::Free,
            Mode::Coop(p) => {
                let q = self.next_pos(p);
                if x == self.word[q] {
                    return Mode::Coop(q);
                }
                let i = self.arena.owner(self.word[p]);
                if i == j {
                    return Mode::Free;
                }
                let t = &self.retaliation[i - 1];
                Mode::Punish(i, t.update[t.initial * n + x])
            }
            Mode::Punish(i, m) => {
                let t = &self.retaliation[i - 1];
                Mode::Punish(i, t.update[m * n + x])
            }
        }
    }

    fn choose(&self, mode: Mode, x: StateId) -> StateId {
        let n = self.arena.num_states();
        let fallback = self.arena.succ(x)[0];
        match mode {
            Mode::Coop(p) if self.word[p] == x => self.word[self.next_pos(p)],
            Mode::Punish(i, m) => {
                let t = self.retaliation[i - 1].moves[m * n + x];
                if t == NO_MOVE {
                    fallback
                } else {
                    t
                }
            }
            _ => fallback,
        }
    }

    /// Player `j`'s strategy: the reachable part of the supervisor, then
    /// minimised.
    fn machine(&self, j: Player) -> Result<MooreStrategy, SeError> {
        let n = self.arena.num_states();
        let mut index: HashMap<Mode, usize> = HashMap::new();
        let mut modes = vec![Mode::Start];
        index.insert(Mode::Start, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut update = Vec::new();
        while let Some(k) = queue.pop_front() {
            let mode = modes[k];
            let row: Vec<usize> = (0..n)
                .map(|x| {
                    let next = self.step(j, mode, x);
                    *index.entry(next).or_insert_with(|| {
                        modes.push(next);
                        queue.push_back(modes.len() - 1);
                        modes.len() - 1
                    })
                })
                .collect();
            if update.len() < (k + 1) * n {
                update.resize((k + 1) * n, 0);
            }
            update[k * n..(k + 1) * n].copy_from_slice(&row);
        }
        let moves: Vec<Option<StateId>> = modes
            .iter()
            .flat_map(|&mode| (0..n).map(move |x| (self.arena.owner(x) == j).then(|| self.choose(mode, x))))
            .collect();
        let (size, update, moves) = minimise(n, modes.len(), &update, &moves);
        MooreStrategy::new(self.arena, j, size, 0, update, moves)
    }
}

/// Moore machine minimisation by partition refinement, followed by a
/// breadth-first renumbering from the initial memory 0.
fn minimise(
    n: usize,
    m: usize,
    update: &[usize],
    moves: &[Option<StateId>],
) -> (usize, Vec<usize>, Vec<Option<StateId>>) {
    let mut block: Vec<usize> = {
        let mut ids: HashMap<&[Option<StateId>], usize> = HashMap::new();
        (0..m)
            .map(|k| {
                let len = ids.len();
                *ids.entry(&moves[k * n..(k + 1) * n]).or_insert(len)
            })
            .collect()
    };
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..m)
            .map(|k| {
                let sig = (block[k], (0..n).map(|x| block[update[k * n + x]]).collect());
                let len = ids.len();
                *ids.entry(sig).or_insert(len)
            })
            .collect();
        let changed = ids.len() != block.iter().copied().max().map_or(0, |b| b + 1);
        block = next;
        if !changed {
            break;
        }
    }
    // renumber blocks in BFS order from the block of memory 0
    let blocks = block.iter().copied().max().map_or(0, |b| b + 1);
    let mut rep = vec![usize::MAX; blocks];
    for (k, &b) in block.iter().enumerate() {
        if rep[b] == usize::MAX {
            rep[b] = k;
        }
    }
    let mut order = vec![usize::MAX; blocks];
    let mut list = vec![block[0]];
    order[block[0]] = 0;
    let mut head = 0;
    while head < list.len() {
        let b = list[head];
        head += 1;
        for x in 0..n {
            let c = block[update[rep[b] * n + x]];
            if order[c] == usize::MAX {
                order[c] = list.len();
                list.push(c);
            }
        }
    }
    let size = list.len();
    let mut new_update = vec![0; size * n];
    let mut new_moves = vec![None; size * n];
    for (k, &b) in list.iter().enumerate() {
        for x in 0..n {
            new_update[k * n + x] = order[block[update[rep[b] * n + x]]];
            new_moves[k * n + x] = moves[rep[b] * n + x];
        }
    }
    (size, new_update, new_moves)
}
