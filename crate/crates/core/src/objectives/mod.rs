//! Winning objectives and their Boolean compositions.
//!
//! Every objective here is prefix independent: whether a play satisfies it
//! depends only on the set of states the play visits infinitely often.

pub(crate) mod cond;
mod formula;

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arena::{GameArena, Lasso, StateId};
use crate::syntax::SyntaxError;

pub use formula::Formula;

use cond::Cond;

pub type StateSet = BTreeSet<StateId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectiveError {
    #[error("objective mentions state #{0}, which is not in the arena")]
    ForeignState(StateId),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("parity colouring covers {got} states, arena has {expected}")]
    ColoringNotTotal { expected: usize, got: usize },
    #[error("expression does not have a supported shape: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// One Streett/Rabin pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair {
    pub f: StateSet,
    pub g: StateSet,
}

impl Pair {
    pub fn new(f: impl IntoIterator<Item = StateId>, g: impl IntoIterator<Item = StateId>) -> Self {
        Pair {
            f: f.into_iter().collect(),
            g: g.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Some state of the set recurs.
    Buchi(StateSet),
    /// No state of the set recurs.
    CoBuchi(StateSet),
    /// Minimal recurring colour is even. Indexed by state.
    Parity(Vec<u64>),
    /// Every pair: `F` does not recur, or `G` recurs.
    Streett(Vec<Pair>),
    /// Some pair: `F` recurs and `G` does not.
    Rabin(Vec<Pair>),
    Muller(Formula),
}

impl Objective {
    pub fn buchi(states: impl IntoIterator<Item = StateId>) -> Self {
        Objective::Buchi(states.into_iter().collect())
    }

    pub fn co_buchi(states: impl IntoIterator<Item = StateId>) -> Self {
        Objective::CoBuchi(states.into_iter().collect())
    }

    /// Short class name, as used in game files.
    pub fn class_name(&self) -> &'static str {
        match self {
            Objective::Buchi(_) => "buchi",
            Objective::CoBuchi(_) => "cobuchi",
            Objective::Parity(_) => "parity",
            Objective::Streett(_) => "streett",
            Objective::Rabin(_) => "rabin",
            Objective::Muller(_) => "muller",
        }
    }

    /// Whether a play with the given recurring set satisfies the objective.
    pub fn holds(&self, inf: &FixedBitSet) -> bool {
        let hit = |set: &StateSet| set.iter().any(|&s| inf.contains(s));
        match self {
            Objective::Buchi(b) => hit(b),
            Objective::CoBuchi(c) => !hit(c),
            Objective::Parity(p) => inf.ones().filter_map(|s| p.get(s)).min().is_some_and(|c| c % 2 == 0),
            Objective::Streett(pairs) => pairs.iter().all(|pr| !hit(&pr.f) || hit(&pr.g)),
            Objective::Rabin(pairs) => pairs.iter().any(|pr| hit(&pr.f) && !hit(&pr.g)),
            Objective::Muller(f) => f.eval(inf),
        }
    }

    /// The objective denoting the complementary set of plays.
    pub fn negate(&self) -> Objective {
        match self {
            Objective::Buchi(b) => Objective::CoBuchi(b.clone()),
            Objective::CoBuchi(c) => Objective::Buchi(c.clone()),
            Objective::Parity(p) => Objective::Parity(p.iter().map(|c| c + 1).collect()),
            Objective::Streett(pairs) => Objective::Rabin(pairs.clone()),
            Objective::Rabin(pairs) => Objective::Streett(pairs.clone()),
            Objective::Muller(f) => Objective::Muller(f.negate()),
        }
    }

    /// Checks that every referenced state lies in an arena of `n` states.
    pub fn check(&self, n: usize) -> Result<(), ObjectiveError> {
        let foreign = |set: &StateSet| set.iter().find(|&&s| s >= n).copied();
        let bad = match self {
            Objective::Buchi(s) | Objective::CoBuchi(s) => foreign(s),
            Objective::Parity(p) => {
                if p.len() != n {
                    return Err(ObjectiveError::ColoringNotTotal {
                        expected: n,
                        got: p.len(),
                    });
                }
                None
            }
            Objective::Streett(pairs) | Objective::Rabin(pairs) => {
                pairs.iter().find_map(|pr| foreign(&pr.f).or_else(|| foreign(&pr.g)))
            }
            Objective::Muller(f) => f.atoms().into_iter().find(|&s| s >= n),
        };
        match bad {
            Some(s) => Err(ObjectiveError::ForeignState(s)),
            None => Ok(()),
        }
    }
}

/// Boolean composition of objectives. `And(vec![])` denotes all plays and
/// `Or(vec![])` no play.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObjectiveExpr {
    Leaf(Objective),
    Not(Box<ObjectiveExpr>),
    And(Vec<ObjectiveExpr>),
    Or(Vec<ObjectiveExpr>),
}

impl From<Objective> for ObjectiveExpr {
    fn from(o: Objective) -> Self {
        ObjectiveExpr::Leaf(o)
    }
}

impl ObjectiveExpr {
    pub fn all_plays() -> Self {
        ObjectiveExpr::And(Vec::new())
    }

    pub fn no_play() -> Self {
        ObjectiveExpr::Or(Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: impl Into<ObjectiveExpr>) -> Self {
        ObjectiveExpr::Not(Box::new(e.into()))
    }

    pub fn and<I, E>(parts: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<ObjectiveExpr>,
    {
        ObjectiveExpr::And(parts.into_iter().map(Into::into).collect())
    }

    pub fn or<I, E>(parts: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<ObjectiveExpr>,
    {
        ObjectiveExpr::Or(parts.into_iter().map(Into::into).collect())
    }

    /// Evaluates the expression on a recurring set.
    pub fn holds(&self, inf: &FixedBitSet) -> bool {
        match self {
            ObjectiveExpr::Leaf(o) => o.holds(inf),
            ObjectiveExpr::Not(x) => !x.holds(inf),
            ObjectiveExpr::And(xs) => xs.iter().all(|x| x.holds(inf)),
            ObjectiveExpr::Or(xs) => xs.iter().any(|x| x.holds(inf)),
        }
    }

    pub fn leaves(&self) -> Vec<&Objective> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Objective>) {
        match self {
            ObjectiveExpr::Leaf(o) => out.push(o),
            ObjectiveExpr::Not(x) => x.collect_leaves(out),
            ObjectiveExpr::And(xs) | ObjectiveExpr::Or(xs) => xs.iter().for_each(|x| x.collect_leaves(out)),
        }
    }

    pub fn check(&self, n: usize) -> Result<(), ObjectiveError> {
        self.leaves().into_iter().try_for_each(|o| o.check(n))
    }
}

/// Whether the play `stem · cycle^ω` belongs to `e`.
pub fn satisfies(arena: &GameArena, lasso: &Lasso, e: &ObjectiveExpr) -> Result<bool, ObjectiveError> {
    e.check(arena.num_states())?;
    if let Some(&s) = lasso
        .stem
        .iter()
        .chain(&lasso.cycle)
        .find(|&&s| s >= arena.num_states())
    {
        return Err(ObjectiveError::ForeignState(s));
    }
    Ok(e.holds(&lasso.inf_set()))
}

/// The complement objective, within the same class where one exists.
pub fn negate(o: &Objective) -> Objective {
    o.negate()
}

/// Collapses a union of Büchi objectives or an intersection of co-Büchi
/// objectives into a single objective. Negated sub-expressions are folded
/// through [`Objective::negate`]. Returns `None` when no closure law applies.
pub fn flatten_same_class(e: &ObjectiveExpr) -> Option<Objective> {
    match e {
        ObjectiveExpr::Leaf(o) => Some(o.clone()),
        ObjectiveExpr::Not(x) => flatten_same_class(x).map(|o| o.negate()),
        ObjectiveExpr::Or(xs) | ObjectiveExpr::And(xs) if xs.len() == 1 => flatten_same_class(&xs[0]),
        ObjectiveExpr::Or(xs) => {
            let mut union = StateSet::new();
            for x in xs {
                match flatten_same_class(x)? {
                    Objective::Buchi(b) => union.extend(b),
                    _ => return None,
                }
            }
            Some(Objective::Buchi(union))
        }
        ObjectiveExpr::And(xs) => {
            let mut union = StateSet::new();
            for x in xs {
                match flatten_same_class(x)? {
                    Objective::CoBuchi(c) => union.extend(c),
                    _ => return None,
                }
            }
            Some(Objective::CoBuchi(union))
        }
    }
}

fn objective_formula(o: &Objective, n: usize) -> Formula {
    let any = |set: &StateSet| Formula::or(set.iter().map(|&s| Formula::Atom(s)));
    let none = |set: &StateSet| Formula::and(set.iter().map(|&s| Formula::NotAtom(s)));
    match o {
        Objective::Buchi(b) => any(b),
        Objective::CoBuchi(c) => none(c),
        Objective::Parity(p) => {
            let mut colors: Vec<u64> = p.to_vec();
            colors.sort_unstable();
            colors.dedup();
            Formula::or(colors.iter().filter(|&&c| c % 2 == 0).map(|&c| {
                let at: StateSet = (0..n).filter(|&s| p[s] == c).collect();
                let below: StateSet = (0..n).filter(|&s| p[s] < c).collect();
                Formula::and([any(&at), none(&below)])
            }))
        }
        Objective::Streett(pairs) => Formula::and(pairs.iter().map(|pr| Formula::or([none(&pr.f), any(&pr.g)]))),
        Objective::Rabin(pairs) => Formula::or(pairs.iter().map(|pr| Formula::and([any(&pr.f), none(&pr.g)]))),
        Objective::Muller(f) => f.clone(),
    }
}

fn expr_formula(e: &ObjectiveExpr, n: usize) -> Formula {
    match e {
        ObjectiveExpr::Leaf(o) => objective_formula(o, n),
        ObjectiveExpr::Not(x) => expr_formula(x, n).negate(),
        ObjectiveExpr::And(xs) => Formula::and(xs.iter().map(|x| expr_formula(x, n))),
        ObjectiveExpr::Or(xs) => Formula::or(xs.iter().map(|x| expr_formula(x, n))),
    }
}

/// An equivalent Muller objective over the arena's `n` states.
pub fn to_muller(e: &ObjectiveExpr, n: usize) -> Objective {
    Objective::Muller(expr_formula(e, n))
}

fn only_buchi_family(e: &ObjectiveExpr) -> Result<(), ObjectiveError> {
    match e
        .leaves()
        .into_iter()
        .find(|o| !matches!(o, Objective::Buchi(_) | Objective::CoBuchi(_)))
    {
        Some(o) => Err(ObjectiveError::ShapeMismatch(format!(
            "{} leaf; only Büchi and co-Büchi leaves are encoded",
            o.class_name()
        ))),
        None => Ok(()),
    }
}

const ENCODING_LIMIT: usize = 4096;

fn to_pairs(pairs: Vec<(FixedBitSet, FixedBitSet)>) -> Vec<Pair> {
    pairs.into_iter().map(|(f, g)| Pair::new(f.ones(), g.ones())).collect()
}

/// A single Streett objective equivalent to `e`, whose leaves must be Büchi
/// or co-Büchi. Clauses of the conjunctive normal form become pairs; a
/// clause with no co-Büchi literal is padded with `F = S`.
pub fn streett_encoding(e: &ObjectiveExpr, n: usize) -> Result<Objective, ObjectiveError> {
    e.check(n)?;
    only_buchi_family(e)?;
    Cond::from_expr(e, n)
        .as_streett(n, ENCODING_LIMIT)
        .map(|p| Objective::Streett(to_pairs(p)))
        .ok_or_else(|| ObjectiveError::ShapeMismatch("a clause needs two co-Büchi literals".into()))
}

/// A single Rabin objective equivalent to `e`, whose leaves must be Büchi or
/// co-Büchi. Terms of the disjunctive normal form become pairs; a term with
/// no Büchi literal is padded with `F = S`.
pub fn rabin_encoding(e: &ObjectiveExpr, n: usize) -> Result<Objective, ObjectiveError> {
    e.check(n)?;
    only_buchi_family(e)?;
    Cond::from_expr(e, n)
        .as_rabin(n, ENCODING_LIMIT)
        .map(|p| Objective::Rabin(to_pairs(p)))
        .ok_or_else(|| ObjectiveError::ShapeMismatch("a term needs two Büchi literals".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, RawArena};

    fn fig1() -> GameArena {
        crate::fixtures::fig1_arena()
    }

    fn fig1_objectives() -> [Objective; 3] {
        [
            Objective::buchi([2, 4]),
            Objective::buchi([0, 5]),
            Objective::buchi([1, 3]),
        ]
    }

    fn set(xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(8);
        xs.iter().for_each(|&x| s.insert(x));
        s
    }

    #[test]
    fn fig1_payoffs() {
        let a = fig1();
        let [p1, p2, p3] = fig1_objectives();
        let coop = Lasso::new(&a, vec![], vec![0, 1, 2]).unwrap();
        let sink = Lasso::new(&a, vec![0, 2], vec![5]).unwrap();
        let bits = |l: &Lasso| {
            [&p1, &p2, &p3]
                .iter()
                .map(|o| satisfies(&a, l, &(*o).clone().into()).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&coop), vec![true, true, true]);
        assert_eq!(bits(&sink), vec![false, true, false]);
        assert!(satisfies(&a, &sink, &Objective::buchi([0, 5]).into()).unwrap());
        assert!(!satisfies(&a, &coop, &Objective::buchi([]).into()).unwrap());
    }

    #[test]
    fn foreign_state_is_rejected() {
        let a = fig1();
        let l = Lasso::new(&a, vec![], vec![0, 1, 2]).unwrap();
        assert_eq!(
            satisfies(&a, &l, &Objective::buchi([9]).into()),
            Err(ObjectiveError::ForeignState(9))
        );
        assert_eq!(
            Objective::Parity(vec![0, 1]).check(6),
            Err(ObjectiveError::ColoringNotTotal { expected: 6, got: 2 })
        );
    }

    #[test]
    fn negation_rules() {
        assert_eq!(negate(&Objective::buchi([2, 4])), Objective::co_buchi([2, 4]));
        assert_eq!(negate(&Objective::Parity(vec![0, 1])), Objective::Parity(vec![1, 2]));
        let pairs = vec![Pair::new([0], [1])];
        assert_eq!(negate(&Objective::Streett(pairs.clone())), Objective::Rabin(pairs));
    }

    #[test]
    fn negation_complements_every_class() {
        let objectives = [
            Objective::buchi([1]),
            Objective::co_buchi([0, 2]),
            Objective::Parity(vec![3, 0, 1]),
            Objective::Streett(vec![Pair::new([0], [1]), Pair::new([2], [])]),
            Objective::Rabin(vec![Pair::new([0, 1], [2])]),
            Objective::Muller(Formula::Or(vec![Formula::Atom(0), Formula::NotAtom(2)])),
        ];
        for o in &objectives {
            for mask in 1u32..8 {
                let inf = set(&(0..3).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>());
                assert_ne!(o.holds(&inf), o.negate().holds(&inf), "{o:?} on {mask:b}");
                assert_eq!(o.holds(&inf), o.negate().negate().holds(&inf));
            }
        }
    }

    #[test]
    fn flattening() {
        let e = ObjectiveExpr::or([Objective::buchi([0, 5]), Objective::buchi([1, 3])]);
        assert_eq!(flatten_same_class(&e), Some(Objective::buchi([0, 1, 3, 5])));
        let leaf: ObjectiveExpr = Objective::Parity(vec![0]).into();
        assert_eq!(flatten_same_class(&leaf), Some(Objective::Parity(vec![0])));
        let e = ObjectiveExpr::and([Objective::buchi([0]), Objective::buchi([1])]);
        assert_eq!(flatten_same_class(&e), None);
        let e = ObjectiveExpr::and([Objective::co_buchi([0]), Objective::co_buchi([1])]);
        assert_eq!(flatten_same_class(&e), Some(Objective::co_buchi([0, 1])));
        let e = ObjectiveExpr::not(ObjectiveExpr::or([Objective::buchi([0]), Objective::buchi([2])]));
        assert_eq!(flatten_same_class(&e), Some(Objective::co_buchi([0, 2])));
    }

    #[test]
    fn muller_translation_examples() {
        let a = fig1();
        let f = to_muller(&Objective::buchi([2, 4]).into(), 6);
        match &f {
            Objective::Muller(m) => assert_eq!(m.display(&a).to_string(), "s2 | s4"),
            _ => unreachable!(),
        }
        let two = validate_arena(
            &RawArena::new(1)
                .state("a", 1)
                .state("b", 1)
                .edge("a", "b")
                .edge("b", "a"),
        )
        .unwrap();
        match to_muller(&Objective::Parity(vec![0, 1]).into(), 2) {
            Objective::Muller(m) => assert_eq!(m.display(&two).to_string(), "a"),
            _ => unreachable!(),
        }
        assert_eq!(
            to_muller(&Objective::buchi([]).into(), 6),
            Objective::Muller(Formula::ff())
        );
    }

    #[test]
    fn fig1_streett_encoding() {
        let [p1, p2, p3] = fig1_objectives();
        let guard = ObjectiveExpr::or([ObjectiveExpr::and([p1, p2, p3.clone()]), ObjectiveExpr::not(p3)]);
        let enc = streett_encoding(&guard, 6).unwrap();
        assert_eq!(
            enc,
            Objective::Streett(vec![
                Pair::new([1, 3], [2, 4]),
                Pair::new([1, 3], [0, 5]),
                Pair::new([1, 3], [1, 3]),
            ])
        );
    }

    #[test]
    fn singleton_winner_guard_is_a_tautology() {
        let b = Objective::buchi([1, 2]);
        let guard = ObjectiveExpr::or([b.clone().into(), ObjectiveExpr::not(b)]);
        let enc = streett_encoding(&guard, 4).unwrap();
        assert_eq!(enc, Objective::Streett(vec![Pair::new([1, 2], [1, 2])]));
        for mask in 1u32..16 {
            let inf = set(&(0..4).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>());
            assert!(enc.holds(&inf));
        }
        let enc = rabin_encoding(
            &ObjectiveExpr::or([
                Objective::co_buchi([1]).into(),
                ObjectiveExpr::not(Objective::co_buchi([1])),
            ]),
            3,
        )
        .unwrap();
        for mask in 1u32..8 {
            let inf = set(&(0..3).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>());
            assert!(enc.holds(&inf));
        }
    }

    #[test]
    fn rabin_encoding_with_padding() {
        // W = {1}, L = {2}, deviating winner 1, co-Büchi sets C1 = {0}, C2 = {1}
        let c1 = Objective::co_buchi([0]);
        let c2 = Objective::co_buchi([1]);
        let guard = ObjectiveExpr::or([c1.clone().into(), c2.into(), ObjectiveExpr::not(c1)]);
        let enc = rabin_encoding(&guard, 3).unwrap();
        assert_eq!(
            enc,
            Objective::Rabin(vec![
                Pair::new([0, 1, 2], [0]),
                Pair::new([0, 1, 2], [1]),
                Pair::new([0], [])
            ])
        );
    }

    #[test]
    fn encodings_reject_other_shapes() {
        let e: ObjectiveExpr = Objective::Parity(vec![0, 1]).into();
        assert!(matches!(streett_encoding(&e, 2), Err(ObjectiveError::ShapeMismatch(_))));
        let e = ObjectiveExpr::or([Objective::co_buchi([0]), Objective::co_buchi([1])]);
        assert!(matches!(streett_encoding(&e, 2), Err(ObjectiveError::ShapeMismatch(_))));
        let e = ObjectiveExpr::and([Objective::buchi([0]), Objective::buchi([1])]);
        assert!(matches!(rabin_encoding(&e, 2), Err(ObjectiveError::ShapeMismatch(_))));
    }
}
