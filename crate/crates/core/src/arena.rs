//! Game arenas: a finite directed graph whose states are partitioned among
//! players `1..=n`, plus ultimately periodic plays (lassos) over it.
//!
//! States are named by strings externally and addressed by dense indices
//! internally. Every set-valued output is reported in input (index) order.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense index of a state inside one arena.
pub type StateId = usize;

/// Player identifier, 1-based.
pub type Player = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("state `{0}` has no successor")]
    DeadEndState(String),
    #[error("state `{0}` has no owner")]
    UnknownOwner(String),
    #[error("edge ({0}, {1}) mentions an undeclared state")]
    DanglingEdge(String, String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("player {0} out of range")]
    PlayerOutOfRange(usize),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("arena has no states")]
    NoStates,
    #[error("invalid lasso: {0}")]
    InvalidLasso(String),
}

/// Unvalidated arena description, as read from a file or built by hand.
#[derive(Debug, Clone, Default)]
pub struct RawArena {
    pub players: usize,
    pub states: Vec<String>,
    pub owner: HashMap<String, Player>,
    pub edges: Vec<(String, String)>,
}

impl RawArena {
    pub fn new(players: usize) -> Self {
        RawArena {
            players,
            ..Default::default()
        }
    }

    /// Adds a state with its owner.
    pub fn state(mut self, name: &str, owner: Player) -> Self {
        self.states.push(name.to_string());
        self.owner.insert(name.to_string(), owner);
        self
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.edges.push((from.to_string(), to.to_string()));
        self
    }
}

/// A validated n-player arena. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameArena {
    players: usize,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    owner: Vec<Player>,
    succ: Vec<Vec<StateId>>,
    pred: Vec<Vec<StateId>>,
}

/// Checks a raw description against the arena invariants.
pub fn validate_arena(raw: &RawArena) -> Result<GameArena, ArenaError> {
    if raw.players == 0 {
        return Err(ArenaError::PlayerOutOfRange(0));
    }
    if raw.states.is_empty() {
        return Err(ArenaError::NoStates);
    }
    let mut index = HashMap::with_capacity(raw.states.len());
    for (i, name) in raw.states.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(ArenaError::DuplicateState(name.clone()));
        }
    }
    // Owner entries for undeclared states are rejected in a stable order.
    let mut stray: Vec<&String> = raw.owner.keys().filter(|k| !index.contains_key(*k)).collect();
    stray.sort();
    if let Some(name) = stray.first() {
        return Err(ArenaError::UnknownState((*name).clone()));
    }
    let mut owner = Vec::with_capacity(raw.states.len());
    for name in &raw.states {
        match raw.owner.get(name) {
            None => return Err(ArenaError::UnknownOwner(name.clone())),
            Some(&p) if p == 0 || p > raw.players => return Err(ArenaError::PlayerOutOfRange(p)),
            Some(&p) => owner.push(p),
        }
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (a, b) in &raw.edges {
        match (index.get(a), index.get(b)) {
            (Some(&x), Some(&y)) => edges.push((x, y)),
            _ => return Err(ArenaError::DanglingEdge(a.clone(), b.clone())),
        }
    }
    GameArena::from_parts(raw.players, raw.states.clone(), owner, edges)
}

impl GameArena {
    /// Builds an arena from already-indexed parts. Duplicate edges collapse.
    pub fn from_parts(
        players: usize,
        names: Vec<String>,
        owner: Vec<Player>,
        edges: Vec<(StateId, StateId)>,
    ) -> Result<Self, ArenaError> {
        if players == 0 {
            return Err(ArenaError::PlayerOutOfRange(0));
        }
        if names.is_empty() {
            return Err(ArenaError::NoStates);
        }
        let n = names.len();
        if let Some(&p) = owner.iter().find(|&&p| p == 0 || p > players) {
            return Err(ArenaError::PlayerOutOfRange(p));
        }
        if owner.len() != n {
            return Err(ArenaError::UnknownOwner(names[owner.len().min(n - 1)].clone()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ArenaError::DuplicateState(name.clone()));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(ArenaError::DanglingEdge(a.to_string(), b.to_string()));
            }
            succ[a].push(b);
            pred[b].push(a);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        if let Some(s) = (0..n).find(|&s| succ[s].is_empty()) {
            return Err(ArenaError::DeadEndState(names[s].clone()));
        }
        Ok(GameArena {
            players,
            names,
            index,
            owner,
            succ,
            pred,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.names.len()
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ArenaError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ArenaError::UnknownState(name.to_string()))
    }

    pub fn owner(&self, s: StateId) -> Player {
        self.owner[s]
    }

    /// States controlled by `player`, in index order.
    pub fn owned_by(&self, player: Player) -> Vec<StateId> {
        self.states().filter(|&s| self.owner[s] == player).collect()
    }

    /// Sorted successor list; never empty.
    pub fn succ(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn pred(&self, s: StateId) -> &[StateId] {
        &self.pred[s]
    }

    pub fn has_edge(&self, a: StateId, b: StateId) -> bool {
        self.succ.get(a).is_some_and(|l| l.binary_search(&b).is_ok())
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().map(move |&b| (a, b)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Successor names of the state called `name`.
    pub fn successors(&self, name: &str) -> Result<BTreeSet<StateId>, ArenaError> {
        let s = self.state_id(name)?;
        Ok(self.succ[s].iter().copied().collect())
    }

    /// The sub-arena on `keep`, renumbered in original order.
    ///
    /// Fails with `DeadEndState` if some kept state loses all of its
    /// successors; use [`GameArena::dead_end_free_core`] first when stranded
    /// states should simply be dropped.
    pub fn restrict<I>(&self, keep: I) -> Result<GameArena, ArenaError>
    where
        I: IntoIterator<Item = StateId>,
    {
        let mut mask = FixedBitSet::with_capacity(self.num_states());
        for s in keep {
            if s >= self.num_states() {
                return Err(ArenaError::UnknownState(format!("#{s}")));
            }
            mask.insert(s);
        }
        let kept: Vec<StateId> = mask.ones().collect();
        let mut renumber = vec![usize::MAX; self.num_states()];
        for (i, &s) in kept.iter().enumerate() {
            renumber[s] = i;
        }
        let names = kept.iter().map(|&s| self.names[s].clone()).collect();
        let owner = kept.iter().map(|&s| self.owner[s]).collect();
        let edges = self
            .edges()
            .filter(|&(a, b)| mask.contains(a) && mask.contains(b))
            .map(|(a, b)| (renumber[a], renumber[b]))
            .collect();
        GameArena::from_parts(self.players, names, owner, edges)
    }

    /// Largest subset of `keep` in which every state has a successor inside
    /// the subset (iterated dead-end removal).
    pub fn dead_end_free_core(&self, keep: &FixedBitSet) -> FixedBitSet {
        let n = self.num_states();
        let mut core = keep.clone();
        core.grow(n);
        let mut inside: Vec<usize> = (0..n)
            .map(|s| self.succ[s].iter().filter(|&&t| core.contains(t)).count())
            .collect();
        let mut stack: Vec<StateId> = core.ones().filter(|&s| inside[s] == 0).collect();
        for &s in &stack {
            core.set(s, false);
        }
        while let Some(s) = stack.pop() {
            for &p in &self.pred[s] {
                if core.contains(p) {
                    inside[p] -= 1;
                    if inside[p] == 0 {
                        core.set(p, false);
                        stack.push(p);
                    }
                }
            }
        }
        core
    }

    /// Formats a state set as `{a, b, c}` in index order.
    pub fn format_set<I: IntoIterator<Item = StateId>>(&self, set: I) -> String {
        let mut ids: Vec<StateId> = set.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        let parts: Vec<&str> = ids.iter().map(|&s| self.name(s)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// The ultimately periodic play `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl Lasso {
    /// Builds a lasso after checking that every step is an arena edge.
    pub fn new(arena: &GameArena, stem: Vec<StateId>, cycle: Vec<StateId>) -> Result<Self, ArenaError> {
        if cycle.is_empty() {
            return Err(ArenaError::InvalidLasso("empty cycle".into()));
        }
        let n = arena.num_states();
        if let Some(&s) = stem.iter().chain(&cycle).find(|&&s| s >= n) {
            return Err(ArenaError::UnknownState(format!("#{s}")));
        }
        let lasso = Lasso { stem, cycle };
        let word: Vec<StateId> = lasso.stem.iter().chain(&lasso.cycle).copied().collect();
        let wrap = (*lasso.cycle.last().unwrap(), lasso.cycle[0]);
        for (a, b) in word.windows(2).map(|w| (w[0], w[1])).chain(std::iter::once(wrap)) {
            if !arena.has_edge(a, b) {
                return Err(ArenaError::InvalidLasso(format!(
                    "({}, {}) is not an edge",
                    arena.name(a),
                    arena.name(b)
                )));
            }
        }
        Ok(lasso)
    }

    /// First state of the play.
    pub fn start(&self) -> StateId {
        self.stem.first().copied().unwrap_or(self.cycle[0])
    }

    /// States occurring infinitely often, i.e. the states of the cycle.
    pub fn inf(&self) -> BTreeSet<StateId> {
        self.cycle.iter().copied().collect()
    }

    pub fn inf_set(&self) -> FixedBitSet {
        let len = self.cycle.iter().max().map_or(0, |m| m + 1);
        let mut set = FixedBitSet::with_capacity(len);
        for &s in &self.cycle {
            set.insert(s);
        }
        set
    }

    /// The same play with its cycle entered `k` steps later.
    pub fn rotated(&self, k: usize) -> Lasso {
        let mut stem = self.stem.clone();
        let k = k % self.cycle.len();
        stem.extend_from_slice(&self.cycle[..k]);
        let mut cycle = self.cycle[k..].to_vec();
        cycle.extend_from_slice(&self.cycle[..k]);
        Lasso { stem, cycle }
    }

    /// The first `len` states of the play.
    pub fn prefix(&self, len: usize) -> Vec<StateId> {
        self.stem
            .iter()
            .chain(self.cycle.iter().cycle())
            .take(len)
            .copied()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> GameArena {
        let raw = RawArena::new(3)
            .state("s0", 1)
            .state("s1", 2)
            .state("s2", 3)
            .state("s3", 1)
            .state("s4", 1)
            .state("s5", 1)
            .edge("s0", "s1")
            .edge("s1", "s0")
            .edge("s1", "s2")
            .edge("s2", "s1")
            .edge("s2", "s0")
            .edge("s0", "s2")
            .edge("s0", "s3")
            .edge("s1", "s4")
            .edge("s2", "s5")
            .edge("s3", "s3")
            .edge("s4", "s4")
            .edge("s5", "s5");
        validate_arena(&raw).unwrap()
    }

    #[test]
    fn fig1_is_valid() {
        let a = fig1();
        assert_eq!(a.num_states(), 6);
        assert_eq!(a.num_edges(), 12);
        assert_eq!(a.owned_by(1), vec![0, 3, 4, 5]);
    }

    #[test]
    fn minimal_arena() {
        let a = validate_arena(&RawArena::new(1).state("s", 1).edge("s", "s")).unwrap();
        assert_eq!(a.succ(0), &[0]);
    }

    #[test]
    fn validation_errors() {
        let dead = RawArena::new(1).state("a", 1).state("b", 1).edge("a", "b");
        assert_eq!(validate_arena(&dead), Err(ArenaError::DeadEndState("b".into())));

        let mut no_owner = RawArena::new(1).state("a", 1).edge("a", "a");
        no_owner.states.push("b".into());
        no_owner.edges.push(("b".into(), "b".into()));
        assert_eq!(validate_arena(&no_owner), Err(ArenaError::UnknownOwner("b".into())));

        let dangling = RawArena::new(1).state("a", 1).edge("a", "zz");
        assert_eq!(
            validate_arena(&dangling),
            Err(ArenaError::DanglingEdge("a".into(), "zz".into()))
        );

        let dup = RawArena::new(1).state("a", 1).state("a", 1).edge("a", "a");
        assert_eq!(validate_arena(&dup), Err(ArenaError::DuplicateState("a".into())));

        let range = RawArena::new(2).state("a", 3).edge("a", "a");
        assert_eq!(validate_arena(&range), Err(ArenaError::PlayerOutOfRange(3)));

        assert_eq!(validate_arena(&RawArena::new(0)), Err(ArenaError::PlayerOutOfRange(0)));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let a = validate_arena(&RawArena::new(1).state("a", 1).edge("a", "a").edge("a", "a")).unwrap();
        assert_eq!(a.num_edges(), 1);
    }

    #[test]
    fn successors_by_name() {
        let a = fig1();
        assert_eq!(a.successors("s0").unwrap(), BTreeSet::from([1, 2, 3]));
        assert_eq!(a.successors("s3").unwrap(), BTreeSet::from([3]));
        assert_eq!(a.successors("s9"), Err(ArenaError::UnknownState("s9".into())));
    }

    #[test]
    fn restriction() {
        let a = fig1();
        let sub = a.restrict([0, 1, 2]).unwrap();
        assert_eq!(sub.num_states(), 3);
        assert_eq!(sub.num_edges(), 6);
        assert_eq!(sub.names(), &["s0", "s1", "s2"]);
        assert_eq!(a.restrict(a.states()).unwrap(), a);
        assert_eq!(a.restrict([0]), Err(ArenaError::DeadEndState("s0".into())));
    }

    #[test]
    fn dead_end_core() {
        let a = fig1();
        let mut keep = FixedBitSet::with_capacity(6);
        keep.insert(0);
        keep.insert(3);
        let core = a.dead_end_free_core(&keep);
        assert_eq!(core.ones().collect::<Vec<_>>(), vec![0, 3]);
        let mut only_s0 = FixedBitSet::with_capacity(6);
        only_s0.insert(0);
        assert_eq!(a.dead_end_free_core(&only_s0).count_ones(..), 0);
    }

    #[test]
    fn lasso_checks_edges() {
        let a = fig1();
        let l = Lasso::new(&a, vec![], vec![0, 1, 2]).unwrap();
        assert_eq!(l.inf(), BTreeSet::from([0, 1, 2]));
        assert!(Lasso::new(&a, vec![], vec![0, 4]).is_err());
        assert!(Lasso::new(&a, vec![0], vec![]).is_err());
        let l = Lasso::new(&a, vec![0, 2], vec![5]).unwrap();
        assert_eq!(l.prefix(4), vec![0, 2, 5, 5]);
    }
}
