//! Brute-force checks, kept independent of the fast solvers where possible.
//!
//! * [`verify_se`] checks a concrete profile: for each player it builds the
//!   product of the arena with everyone else's machine, where only that
//!   player chooses, and asks whether a play with a better payoff exists.
//! * [`brute_region`] and [`enumerate_bounded_se`] search over Moore
//!   profiles with bounded memory. Tables are filled lazily in the order the
//!   search needs them, and a partial profile is dropped as soon as the
//!   moves fixed so far already allow a bad cycle. Each refutation names
//!   the entries it used, and the search backjumps over entries it did not.
//! * [`lasso_region`] enumerates recurring sets directly.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arena::{GameArena, Lasso, Player, StateId};
use crate::objectives::cond::Cond;
use crate::objectives::{Objective, ObjectiveExpr};
use crate::secure_eq::{payoff, prefers, Constraint, MooreStrategy, PayoffProfile, SeError, StrategyProfile};
use crate::zero_sum::graph::{is_nontrivial, sccs, shortest_path, Graph};
use crate::zero_sum::{self, Region, Route, SolveError, SolverConfig};

/// Largest arena the exhaustive searches accept.
pub const MAX_STATES: usize = 8;
/// Per-state node budget for the escape regions that prune
/// [`enumerate_bounded_se`]; they only speed the search up.
const ESCAPE_BUDGET: usize = 200;

/// Largest memory bound the exhaustive searches accept.
pub const MAX_MEMORY_BOUND: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {states} states, memory bound {bound} (limits {MAX_STATES}, {MAX_MEMORY_BOUND})")]
    TooLarge { states: usize, bound: usize },
    #[error("search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Se(#[from] SeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// An improving deviation found by [`verify_se`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationReport {
    pub player: Player,
    pub baseline: PayoffProfile,
    pub achievable: PayoffProfile,
    /// A play the deviator can enforce against the others' strategies.
    pub witness: Lasso,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Secure { payoff: PayoffProfile },
    Deviation(DeviationReport),
}

impl Verification {
    pub fn is_secure(&self) -> bool {
        matches!(self, Verification::Secure { .. })
    }
}

fn exact(objectives: &[Objective], u: &PayoffProfile, n: usize) -> Cond {
    Cond::And(
        objectives
            .iter()
            .zip(u.bits())
            .map(|(o, &b)| Cond::from_objective(&if b { o.clone() } else { o.negate() }, n))
            .collect(),
    )
}

fn improving(objectives: &[Objective], i: Player, u: &PayoffProfile, n: usize) -> Cond {
    Cond::Or(
        PayoffProfile::all(u.len())
            .filter(|w| prefers(i, u, w))
            .map(|w| exact(objectives, &w, n))
            .collect(),
    )
}

/// Is `profile` a secure equilibrium from `s`? Deviations of any memory are
/// covered: in the product only the deviator chooses, so the question is
/// whether some path there has an improving payoff.
pub fn verify_se(
    a: &GameArena,
    objectives: &[Objective],
    profile: &StrategyProfile,
    s: StateId,
) -> Result<Verification, OracleError> {
    if objectives.len() != a.players() {
        return Err(SeError::ProfileLength {
            expected: a.players(),
            got: objectives.len(),
        }
        .into());
    }
    let n = a.num_states();
    let baseline = payoff(&crate::secure_eq::outcome(a, profile, s), objectives);
    let cfg = SolverConfig::default();
    for i in 1..=a.players() {
        let (graph, labels) = deviation_product(a, profile, i, s);
        let cond = improving(objectives, i, &baseline, n).lift(&labels);
        let sol = zero_sum::cooperative_on(&graph, &graph.full(), &cond, &cfg)?;
        if let Some((stem, cycle)) = zero_sum::cooperative_lasso_on(&graph, &graph.full(), &sol.good, 0) {
            let witness = Lasso {
                stem: stem.iter().map(|&v| labels[v]).collect(),
                cycle: cycle.iter().map(|&v| labels[v]).collect(),
            };
            let achievable = payoff(&witness, objectives);
            debug_assert!(prefers(i, &baseline, &achievable));
            return Ok(Verification::Deviation(DeviationReport {
                player: i,
                baseline,
                achievable,
                witness,
            }));
        }
    }
    Ok(Verification::Secure { payoff: baseline })
}

/// Reachable product of the arena with every machine but player `i`'s.
/// Node 0 is the start; `labels[v]` is the arena state of node `v`.
fn deviation_product(a: &GameArena, profile: &StrategyProfile, i: Player, s: StateId) -> (Graph, Vec<StateId>) {
    let strategies = profile.strategies();
    let start: Vec<usize> = strategies
        .iter()
        .map(|st| if st.player() == i { 0 } else { st.start(s) })
        .collect();
    let mut index: HashMap<(StateId, Vec<usize>), usize> = HashMap::new();
    let mut nodes = vec![(s, start.clone())];
    index.insert((s, start), 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < nodes.len() {
        let (x, mem) = nodes[head].clone();
        head += 1;
        let owner = a.owner(x);
        let targets: Vec<StateId> = if owner == i {
            a.succ(x).to_vec()
        } else {
            vec![strategies[owner - 1]
                .next_state(mem[owner - 1], x)
                .expect("validated profile")]
        };
        let mut out = Vec::with_capacity(targets.len());
        for t in targets {
            let m2: Vec<usize> = strategies
                .iter()
                .zip(&mem)
                .map(|(st, &m)| if st.player() == i { 0 } else { st.update(m, t) })
                .collect();
            let key = (t, m2);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    index.insert(key.clone(), id);
                    nodes.push(key);
                    id
                }
            };
            out.push(id);
        }
        succ.push(out);
    }
    let labels = nodes.iter().map(|(x, _)| *x).collect();
    (Graph::from_succ(succ), labels)
}

/// States from which some play satisfies `e`, found by enumerating every
/// candidate recurring set. Exponential; meant for arenas of a dozen states.
pub fn lasso_region(a: &GameArena, e: &ObjectiveExpr) -> Result<Region, OracleError> {
    let n = a.num_states();
    if n > 2 * MAX_STATES {
        return Err(OracleError::TooLarge { states: n, bound: 0 });
    }
    e.check(n).map_err(SolveError::from)?;
    let mut good = FixedBitSet::with_capacity(n);
    for mask in 1u32..1 << n {
        let set = |s: StateId| mask >> s & 1 == 1;
        let members: Vec<StateId> = (0..n).filter(|&s| set(s)).collect();
        if members.len() == 1 && !a.has_edge(members[0], members[0]) {
            continue;
        }
        let root = members[0];
        let forward = reach(n, root, |x| a.succ(x).iter().copied().filter(|&t| set(t)).collect());
        let backward = reach(n, root, |x| a.pred(x).iter().copied().filter(|&t| set(t)).collect());
        if members.iter().all(|&m| forward.contains(m) && backward.contains(m)) {
            let mut inf = FixedBitSet::with_capacity(n);
            members.iter().for_each(|&m| inf.insert(m));
            if e.holds(&inf) {
                good.union_with(&inf);
            }
        }
    }
    let mut region = FixedBitSet::with_capacity(n);
    for s in 0..n {
        let r = reach(n, s, |x| a.succ(x).to_vec());
        if !r.is_disjoint(&good) {
            region.insert(s);
        }
    }
    Ok(Region::new(region, Route::Cooperative))
}

fn reach(n: usize, from: StateId, next: impl Fn(StateId) -> Vec<StateId>) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(from);
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for t in next(x) {
            if !seen.contains(t) {
                seen.insert(t);
                stack.push(t);
            }
        }
    }
    seen
}

/// Search limits for the bounded-memory enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of partial profiles examined per start state.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 2_000_000 }
    }
}

fn guard(a: &GameArena, bound: usize) -> Result<(), OracleError> {
    if a.num_states() > MAX_STATES || bound > MAX_MEMORY_BOUND {
        return Err(OracleError::TooLarge {
            states: a.num_states(),
            bound,
        });
    }
    Ok(())
}

/// `⟨⟨P⟩⟩(e)` by searching coalition profiles whose players each have at
/// most `max(1, memory_bound)` memory states. Exact whenever such memory
/// suffices for the coalition (e.g. Büchi, co-Büchi and parity objectives,
/// which are positionally determined).
pub fn brute_region(
    a: &GameArena,
    coalition: &[Player],
    e: &ObjectiveExpr,
    memory_bound: usize,
) -> Result<Region, OracleError> {
    brute_region_with(a, coalition, e, memory_bound, &SearchConfig::default())
}

pub fn brute_region_with(
    a: &GameArena,
    coalition: &[Player],
    e: &ObjectiveExpr,
    memory_bound: usize,
    cfg: &SearchConfig,
) -> Result<Region, OracleError> {
    guard(a, memory_bound)?;
    let g = zero_sum::CoalitionGame::new(a, coalition.iter().copied(), e.clone())?;
    let in_coalition: Vec<bool> = (1..=a.players()).map(|p| g.coalition.contains(&p)).collect();
    let good = Cond::from_expr(e, a.num_states());
    Ok(Region::new(
        forced(a, &in_coalition, &good, memory_bound, cfg.budget, false)?,
        Route::Auto,
    ))
}

/// States from which the marked players, each with at most `memory_bound`
/// memory, can force `good`. With `partial`, a state whose search runs out
/// of budget is left out instead of failing the whole computation.
fn forced(
    a: &GameArena,
    in_coalition: &[bool],
    good: &Cond,
    memory_bound: usize,
    budget: usize,
    partial: bool,
) -> Result<FixedBitSet, OracleError> {
    let n = a.num_states();
    let bad = good.negate();
    let free: Vec<bool> = in_coalition.iter().map(|&c| !c).collect();
    let mut region = FixedBitSet::with_capacity(n);
    for s in 0..n {
        let mut search = Search::new(a, in_coalition, memory_bound, budget);
        let check = |t: &Tables| -> Result<Step, OracleError> {
            let explored = t.explore(a, s, &free);
            if let Some(why) = explored.bad_cycle(&bad.lift(&explored.labels))? {
                return Ok(Step::Violation(why));
            }
            Ok(explored.need.map_or(Step::Success, Step::Need))
        };
        match search.run(&check) {
            Ok(true) => region.insert(s),
            Ok(false) | Err(OracleError::BudgetExceeded { .. }) if partial => {}
            Ok(false) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(region)
}

/// Outcome of [`enumerate_bounded_se`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedSearch {
    Found(StrategyProfile),
    /// No profile within the memory bound works. Evidence only: a secure
    /// equilibrium needing more memory may still exist.
    NoneWithinBound,
}

/// Looks for a secure equilibrium from `s` with payoff `v` among profiles
/// whose players each have at most `max(1, memory_bound)` memory states.
pub fn enumerate_bounded_se(
    a: &GameArena,
    objectives: &[Objective],
    s: StateId,
    v: &Constraint,
    memory_bound: usize,
) -> Result<BoundedSearch, OracleError> {
    enumerate_bounded_se_with(a, objectives, s, v, memory_bound, &SearchConfig::default())
}

pub fn enumerate_bounded_se_with(
    a: &GameArena,
    objectives: &[Objective],
    s: StateId,
    v: &Constraint,
    memory_bound: usize,
    cfg: &SearchConfig,
) -> Result<BoundedSearch, OracleError> {
    bounded_se(a, objectives, s, v, memory_bound, cfg, true)
}

/// `prune` enables two shortcuts that never change the answer: outcomes
/// heading where the target payoff is unreachable, and deviations reaching
/// a state from which the deviator alone forces an improvement.
fn bounded_se(
    a: &GameArena,
    objectives: &[Objective],
    s: StateId,
    v: &Constraint,
    memory_bound: usize,
    cfg: &SearchConfig,
    prune: bool,
) -> Result<BoundedSearch, OracleError> {
    guard(a, memory_bound)?;
    let players = a.players();
    if objectives.len() != players || v.len() != players {
        return Err(SeError::ProfileLength {
            expected: players,
            got: objectives.len().min(v.len()),
        }
        .into());
    }
    let n = a.num_states();
    let target = v.as_payoff();
    let conds: Vec<Cond> = (1..=players).map(|i| improving(objectives, i, &target, n)).collect();
    let everyone = vec![true; players];
    // arena states from which some play has exactly the target payoff
    let graph = Graph::from_arena(a);
    let viable = if prune {
        zero_sum::cooperative_on(
            &graph,
            &graph.full(),
            &exact(objectives, &target, n),
            &SolverConfig::default(),
        )?
        .region
    } else {
        graph.full()
    };
    // states from which a player alone can force an improvement on the
    // target; found by the same exhaustive search, so an under-approximation
    let mut escape = Vec::with_capacity(players);
    for i in 1..=players {
        let alone: Vec<bool> = (1..=players).map(|p| p == i).collect();
        escape.push(if prune {
            forced(a, &alone, &conds[i - 1], memory_bound, ESCAPE_BUDGET, true)?
        } else {
            FixedBitSet::with_capacity(n)
        });
    }
    let mut search = Search::new(a, &everyone, memory_bound, cfg.budget);
    let check = |t: &Tables| -> Result<Step, OracleError> {
        let play = t.explore(a, s, &vec![false; players]);
        if play.frontier.is_some_and(|f| !viable.contains(f)) {
            // the outcome is committed to reach a state with no way back to
            // the target payoff
            return Ok(Step::Violation(play.all_uses()));
        }
        if play.need.is_none() {
            let mut inf = FixedBitSet::with_capacity(n);
            for comp in sccs(&play.graph, &play.graph.full()) {
                if is_nontrivial(&play.graph, &comp) {
                    comp.iter().for_each(|&v| inf.insert(play.labels[v]));
                }
            }
            let u = PayoffProfile::new(objectives.iter().map(|o| o.holds(&inf)).collect());
            if u != target {
                return Ok(Step::Violation(play.all_uses()));
            }
        }
        // deviations are judged against the target payoff, so they can refute
        // a partial profile before its own outcome is settled
        let mut first = play.need;
        for i in 1..=players {
            let free: Vec<bool> = (1..=players).map(|p| p == i).collect();
            let dev = t.explore(a, s, &free);
            if let Some(why) = dev.reaches(&escape[i - 1]) {
                return Ok(Step::Violation(why));
            }
            if let Some(why) = dev.bad_cycle(&conds[i - 1].lift(&dev.labels))? {
                return Ok(Step::Violation(why));
            }
            first = first.or(dev.need);
        }
        Ok(first.map_or(Step::Success, Step::Need))
    };
    if search.run(&check)? {
        let profile = search.tables.into_profile(a)?;
        return Ok(BoundedSearch::Found(profile));
    }
    Ok(BoundedSearch::NoneWithinBound)
}

/// A table entry of one searched player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Entry {
    Update(Player, usize, StateId),
    Move(Player, usize, StateId),
}

enum Step {
    /// Every completion of the tables fails; the listed entries suffice.
    Violation(Vec<Entry>),
    Need(Entry),
    Success,
}

/// Partially filled Moore tables for the searched players.
struct Tables {
    states: usize,
    bound: Vec<usize>,
    searched: Vec<bool>,
    update: Vec<Vec<Option<usize>>>,
    moves: Vec<Vec<Option<StateId>>>,
    used: Vec<usize>,
}

struct Explored {
    graph: Graph,
    labels: Vec<StateId>,
    need: Option<Entry>,
    /// Arena state at which the exploration first got stuck on `need`.
    frontier: Option<StateId>,
    /// Entries read to enter the start node, to choose each node's moves,
    /// and to follow each edge (keyed by target).
    start_uses: Vec<Entry>,
    move_uses: Vec<Option<Entry>>,
    edge_uses: Vec<Vec<(usize, Vec<Entry>)>>,
}

/// Drops the memory updates of players who make no move along a play: the
/// same sequence of states stays consistent with their strategy whatever
/// their memory does.
fn relevant(why: Vec<Entry>) -> Vec<Entry> {
    let movers: HashSet<Player> = why
        .iter()
        .filter_map(|e| match *e {
            Entry::Move(p, ..) => Some(p),
            Entry::Update(..) => None,
        })
        .collect();
    why.into_iter()
        .filter(|e| match *e {
            Entry::Update(p, ..) => movers.contains(&p),
            Entry::Move(..) => true,
        })
        .collect()
}

impl Explored {
    fn all_uses(&self) -> Vec<Entry> {
        let moves = self.move_uses.iter().flatten();
        let edges = self.edge_uses.iter().flatten().flat_map(|(_, e)| e);
        relevant(self.start_uses.iter().chain(moves).chain(edges).copied().collect())
    }

    fn edge(&self, from: usize, to: usize, why: &mut Vec<Entry>) {
        why.extend(self.move_uses[from]);
        let (_, uses) = self.edge_uses[from]
            .iter()
            .find(|(w, _)| *w == to)
            .expect("lasso follows edges");
        why.extend(uses);
    }

    /// Entries on which reaching a node labelled in `target` depends.
    fn reaches(&self, target: &FixedBitSet) -> Option<Vec<Entry>> {
        let end = (0..self.graph.len()).find(|&v| target.contains(self.labels[v]))?;
        let mut nodes = FixedBitSet::with_capacity(self.graph.len());
        nodes.insert(end);
        let path = shortest_path(&self.graph, &self.graph.full(), 0, &nodes).expect("graph is reachable from 0");
        let mut why = self.start_uses.clone();
        for pair in path.windows(2) {
            self.edge(pair[0], pair[1], &mut why);
        }
        Some(relevant(why))
    }

    /// Entries on which a cycle satisfying `cond` depends, if there is one.
    /// The graph is fully reachable from node 0.
    fn bad_cycle(&self, cond: &Cond) -> Result<Option<Vec<Entry>>, OracleError> {
        if self.graph.len() == 0 {
            return Ok(None);
        }
        let full = self.graph.full();
        let sol = zero_sum::cooperative_on(&self.graph, &full, cond, &SolverConfig::default())?;
        let Some((stem, cycle)) = zero_sum::cooperative_lasso_on(&self.graph, &full, &sol.good, 0) else {
            return Ok(None);
        };
        let mut why = self.start_uses.clone();
        let walk: Vec<usize> = stem.iter().chain(&cycle).copied().chain([cycle[0]]).collect();
        for pair in walk.windows(2) {
            self.edge(pair[0], pair[1], &mut why);
        }
        Ok(Some(relevant(why)))
    }
}

impl Tables {
    /// The part of the product reachable from `s` that the filled entries
    /// determine. Players marked `free` choose freely and carry no memory.
    fn explore(&self, a: &GameArena, s: StateId, free: &[bool]) -> Explored {
        let n = self.states;
        let tracked = |p: usize| self.searched[p] && !free[p];
        let mut need = None;
        let mut frontier = None;
        let advance = |mem: &[usize], t: StateId, need: &mut Option<Entry>, uses: &mut Vec<Entry>| {
            let mut out = vec![0; mem.len()];
            for p in 0..mem.len() {
                if tracked(p) {
                    let entry = Entry::Update(p + 1, mem[p], t);
                    match self.update[p][mem[p] * n + t] {
                        Some(m) => {
                            out[p] = m;
                            uses.push(entry);
                        }
                        None => {
                            need.get_or_insert(entry);
                            return None;
                        }
                    }
                }
            }
            Some(out)
        };
        let init = vec![0; self.bound.len()];
        let mut start_uses = Vec::new();
        let Some(start) = advance(&init, s, &mut need, &mut start_uses) else {
            return Explored {
                graph: Graph::from_succ(Vec::new()),
                labels: Vec::new(),
                need,
                frontier: Some(s),
                start_uses,
                move_uses: Vec::new(),
                edge_uses: Vec::new(),
            };
        };
        let mut index: HashMap<(StateId, Vec<usize>), usize> = HashMap::new();
        let mut nodes = vec![(s, start.clone())];
        index.insert((s, start), 0);
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut move_uses = Vec::new();
        let mut edge_uses = Vec::new();
        let mut head = 0;
        while head < nodes.len() {
            let (x, mem) = nodes[head].clone();
            head += 1;
            let mut move_use = None;
            let owner = a.owner(x) - 1;
            let targets: Vec<StateId> = if free[owner] || !self.searched[owner] {
                a.succ(x).to_vec()
            } else {
                let entry = Entry::Move(owner + 1, mem[owner], x);
                match self.moves[owner][mem[owner] * n + x] {
                    Some(t) => {
                        move_use = Some(entry);
                        vec![t]
                    }
                    None => {
                        if need.is_none() {
                            need = Some(entry);
                            frontier = Some(x);
                        }
                        Vec::new()
                    }
                }
            };
            let mut out = Vec::new();
            let mut out_uses = Vec::new();
            for t in targets {
                let mut uses = Vec::new();
                let stuck = need.is_none();
                let Some(m2) = advance(&mem, t, &mut need, &mut uses) else {
                    if stuck {
                        frontier = Some(t);
                    }
                    continue;
                };
                let key = (t, m2);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = nodes.len();
                        index.insert(key.clone(), id);
                        nodes.push(key);
                        id
                    }
                };
                out.push(id);
                out_uses.push((id, uses));
            }
            succ.push(out);
            move_uses.push(move_use);
            edge_uses.push(out_uses);
        }
        Explored {
            graph: Graph::from_succ(succ),
            labels: nodes.iter().map(|(x, _)| *x).collect(),
            need,
            frontier,
            start_uses,
            move_uses,
            edge_uses,
        }
    }

    fn set(&mut self, e: Entry, value: Option<usize>) {
        let n = self.states;
        match e {
            Entry::Update(p, m, x) => self.update[p - 1][m * n + x] = value,
            Entry::Move(p, m, x) => self.moves[p - 1][m * n + x] = value,
        }
    }

    fn assigned(&self) -> Vec<Entry> {
        let n = self.states;
        let mut out = Vec::new();
        for p in 0..self.bound.len() {
            for k in 0..self.bound[p] * n {
                if self.update[p][k].is_some() {
                    out.push(Entry::Update(p + 1, k / n, k % n));
                }
                if self.moves[p][k].is_some() {
                    out.push(Entry::Move(p + 1, k / n, k % n));
                }
            }
        }
        out
    }

    /// Completes unfilled entries arbitrarily (they are never consulted from
    /// the start state) and builds the profile.
    fn into_profile(self, a: &GameArena) -> Result<StrategyProfile, SeError> {
        let n = self.states;
        let mut strategies = Vec::new();
        for p in 0..self.bound.len() {
            let player = p + 1;
            let size = self.used[p].max(1);
            let update = (0..size * n)
                .map(|k| self.update[p].get(k).copied().flatten().unwrap_or(0))
                .collect();
            let moves = (0..size * n)
                .map(|k| {
                    let x = k % n;
                    (a.owner(x) == player).then(|| self.moves[p].get(k).copied().flatten().unwrap_or(a.succ(x)[0]))
                })
                .collect();
            strategies.push(MooreStrategy::new(a, player, size, 0, update, moves)?);
        }
        StrategyProfile::new(a, strategies)
    }
}

enum Verdict {
    Found,
    /// No completion works; any tables agreeing on these entries fail too.
    Refuted(HashSet<Entry>),
}

/// Depth-first filling of the tables with conflict-directed backjumping:
/// when a refutation below an entry does not mention that entry, its other
/// values are refuted by the same argument and are skipped.
struct Search<'a> {
    arena: &'a GameArena,
    tables: Tables,
    visited: usize,
    budget: usize,
}

impl<'a> Search<'a> {
    fn new(a: &'a GameArena, searched: &[bool], memory_bound: usize, budget: usize) -> Self {
        let n = a.num_states();
        let players = a.players();
        let bound: Vec<usize> = (1..=players)
            .map(|p| {
                if a.owned_by(p).is_empty() {
                    1
                } else {
                    memory_bound.max(1)
                }
            })
            .collect();
        let update = (0..players)
            .map(|p| {
                // a single memory state needs no decisions
                let fill = if bound[p] == 1 { Some(0) } else { None };
                vec![fill; bound[p] * n]
            })
            .collect();
        let moves = (0..players).map(|p| vec![None; bound[p] * n]).collect();
        Search {
            arena: a,
            tables: Tables {
                states: n,
                bound,
                searched: searched.to_vec(),
                update,
                moves,
                used: vec![1; players],
            },
            visited: 0,
            budget,
        }
    }

    fn run(&mut self, check: &dyn Fn(&Tables) -> Result<Step, OracleError>) -> Result<bool, OracleError> {
        Ok(matches!(self.branch(check)?, Verdict::Found))
    }

    fn branch(&mut self, check: &dyn Fn(&Tables) -> Result<Step, OracleError>) -> Result<Verdict, OracleError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        let need = match check(&self.tables)? {
            Step::Violation(why) => return Ok(Verdict::Refuted(why.into_iter().collect())),
            Step::Success => return Ok(Verdict::Found),
            Step::Need(need) => need,
        };
        let (options, exhaustive): (Vec<usize>, bool) = match need {
            Entry::Update(p, ..) => {
                // labels are introduced in order: reuse one, or open the next
                let bound = self.tables.bound[p - 1];
                let k = (self.tables.used[p - 1] + 1).min(bound);
                ((0..k).collect(), k == bound)
            }
            Entry::Move(_, _, x) => (self.arena.succ(x).to_vec(), true),
        };
        let mut why = HashSet::new();
        for value in options {
            let opened = matches!(need, Entry::Update(p, ..) if value == self.tables.used[p - 1]);
            if let (true, Entry::Update(p, ..)) = (opened, need) {
                self.tables.used[p - 1] += 1;
            }
            self.tables.set(need, Some(value));
            let verdict = self.branch(check)?;
            let Verdict::Refuted(c) = verdict else {
                return Ok(Verdict::Found);
            };
            if let (true, Entry::Update(p, ..)) = (opened, need) {
                self.tables.used[p - 1] -= 1;
            }
            if exhaustive && !c.contains(&need) {
                self.tables.set(need, None);
                return Ok(Verdict::Refuted(c));
            }
            why.extend(c);
        }
        self.tables.set(need, None);
        if !exhaustive {
            // the skipped labels are covered by symmetry only
            return Ok(Verdict::Refuted(self.tables.assigned().into_iter().collect()));
        }
        why.remove(&need);
        Ok(Verdict::Refuted(why))
    }
}
