use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::arena::{GameArena, StateId};
use crate::syntax::{self, BoolExpr};

use super::ObjectiveError;

/// Muller formula in negation normal form. Atom `s` holds when `s` occurs
/// infinitely often. `And(vec![])` is true and `Or(vec![])` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(StateId),
    NotAtom(StateId),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn tt() -> Formula {
        Formula::And(Vec::new())
    }

    pub fn ff() -> Formula {
        Formula::Or(Vec::new())
    }

    fn is_tt(&self) -> bool {
        matches!(self, Formula::And(v) if v.is_empty())
    }

    fn is_ff(&self) -> bool {
        matches!(self, Formula::Or(v) if v.is_empty())
    }

    /// Conjunction with flattening and constant folding.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                p if p.is_ff() => return Formula::ff(),
                p => out.push(p),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Formula::And(out)
        }
    }

    /// Disjunction with flattening and constant folding.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                p if p.is_tt() => return Formula::tt(),
                p => out.push(p),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Formula::Or(out)
        }
    }

    pub fn negate(&self) -> Formula {
        match self {
            Formula::Atom(s) => Formula::NotAtom(*s),
            Formula::NotAtom(s) => Formula::Atom(*s),
            Formula::And(xs) => Formula::Or(xs.iter().map(Formula::negate).collect()),
            Formula::Or(xs) => Formula::And(xs.iter().map(Formula::negate).collect()),
        }
    }

    pub fn eval(&self, inf: &FixedBitSet) -> bool {
        match self {
            Formula::Atom(s) => inf.contains(*s),
            Formula::NotAtom(s) => !inf.contains(*s),
            Formula::And(xs) => xs.iter().all(|x| x.eval(inf)),
            Formula::Or(xs) => xs.iter().any(|x| x.eval(inf)),
        }
    }

    /// States mentioned by the formula.
    pub fn atoms(&self) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<StateId>) {
        match self {
            Formula::Atom(s) | Formula::NotAtom(s) => {
                out.insert(*s);
            }
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
        }
    }

    /// Number of nodes in the formula tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NotAtom(_) => 1,
            Formula::And(xs) | Formula::Or(xs) => 1 + xs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Parses the concrete syntax, resolving atoms against the arena.
    pub fn parse(arena: &GameArena, text: &str) -> Result<Formula, ObjectiveError> {
        let expr = syntax::parse(text)?;
        Self::from_syntax(arena, &expr)
    }

    pub fn from_syntax(arena: &GameArena, expr: &BoolExpr) -> Result<Formula, ObjectiveError> {
        Ok(match expr {
            BoolExpr::Const(true) => Formula::tt(),
            BoolExpr::Const(false) => Formula::ff(),
            BoolExpr::Atom(name) => Formula::Atom(
                arena
                    .state_id(name)
                    .map_err(|_| ObjectiveError::UnknownState(name.clone()))?,
            ),
            BoolExpr::Not(x) => Self::from_syntax(arena, x)?.negate(),
            BoolExpr::And(xs) => Formula::And(
                xs.iter()
                    .map(|x| Self::from_syntax(arena, x))
                    .collect::<Result<_, _>>()?,
            ),
            BoolExpr::Or(xs) => Formula::Or(
                xs.iter()
                    .map(|x| Self::from_syntax(arena, x))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    pub fn to_syntax(&self, arena: &GameArena) -> BoolExpr {
        match self {
            Formula::Atom(s) => BoolExpr::Atom(arena.name(*s).to_string()),
            Formula::NotAtom(s) => BoolExpr::Not(Box::new(BoolExpr::Atom(arena.name(*s).to_string()))),
            Formula::And(xs) => BoolExpr::And(xs.iter().map(|x| x.to_syntax(arena)).collect()),
            Formula::Or(xs) => BoolExpr::Or(xs.iter().map(|x| x.to_syntax(arena)).collect()),
        }
    }

    /// Renders the formula with state names.
    pub fn display<'a>(&'a self, arena: &'a GameArena) -> impl fmt::Display + 'a {
        self.to_syntax(arena)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, RawArena};

    fn arena() -> GameArena {
        validate_arena(
            &RawArena::new(1)
                .state("a", 1)
                .state("b", 1)
                .state("c", 1)
                .edge("a", "b")
                .edge("b", "c")
                .edge("c", "a"),
        )
        .unwrap()
    }

    fn set(xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(3);
        xs.iter().for_each(|&x| s.insert(x));
        s
    }

    #[test]
    fn parse_and_eval() {
        let a = arena();
        let f = Formula::parse(&a, "a & !(b | c)").unwrap();
        assert!(f.eval(&set(&[0])));
        assert!(!f.eval(&set(&[0, 1])));
        assert_eq!(f.atoms(), BTreeSet::from([0, 1, 2]));
        assert!(matches!(Formula::parse(&a, "zz"), Err(ObjectiveError::UnknownState(_))));
    }

    #[test]
    fn display_round_trip() {
        let a = arena();
        for src in ["a | b", "a & !b", "(a | b) & !c", "true", "false"] {
            let f = Formula::parse(&a, src).unwrap();
            let again = Formula::parse(&a, &f.display(&a).to_string()).unwrap();
            assert_eq!(f, again, "{src}");
        }
    }

    #[test]
    fn smart_constructors_fold_constants() {
        assert_eq!(Formula::and([Formula::Atom(0), Formula::tt()]), Formula::Atom(0));
        assert_eq!(Formula::and([Formula::Atom(0), Formula::ff()]), Formula::ff());
        assert_eq!(Formula::or([Formula::Atom(0), Formula::tt()]), Formula::tt());
        assert_eq!(Formula::or([Formula::ff(), Formula::Atom(1)]), Formula::Atom(1));
    }
}
