//! JSON game files and witness files.
//!
//! A game file:
//!
//! ```json
//! {
//!   "players": 2,
//!   "states": ["a", "b"],
//!   "owner": {"a": 1, "b": 2},
//!   "edges": [["a", "b"], ["b", "a"], ["b", "b"]],
//!   "objectives": [
//!     {"player": 1, "type": "buchi", "states": ["a"]},
//!     {"player": 2, "type": "muller", "formula": "b & !a"}
//!   ]
//! }
//! ```
//!
//! Objective types are `buchi` and `cobuchi` (`states`), `parity`
//! (`colors`, a map from every state to a natural), `streett` and `rabin`
//! (`pairs`, a list of `{"f": [...], "g": [...]}`) and `muller` (`formula`).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{validate_arena, ArenaError, GameArena, Lasso, Player, RawArena, StateId};
use crate::objectives::{Formula, Objective, ObjectiveExpr, Pair, StateSet};
use crate::secure_eq::{Constraint, MooreStrategy, SeError, StrategyProfile, Witness};
use crate::syntax::{self, BoolExpr};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Arena {
        line: usize,
        #[source]
        source: ArenaError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Parse { line, .. } | FormatError::Arena { line, .. } => Some(*line),
            FormatError::Io { .. } => None,
        }
    }
}

/// An arena with one objective per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub arena: GameArena,
    pub objectives: Vec<Objective>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub states: Vec<String>,
    pub owner: BTreeMap<String, Player>,
    pub edges: Vec<(String, String)>,
    pub objectives: Vec<ObjectiveSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Buchi {
        player: Player,
        states: Vec<String>,
    },
    #[serde(rename = "cobuchi")]
    CoBuchi {
        player: Player,
        states: Vec<String>,
    },
    Parity {
        player: Player,
        colors: BTreeMap<String, u64>,
    },
    Streett {
        player: Player,
        pairs: Vec<PairSpec>,
    },
    Rabin {
        player: Player,
        pairs: Vec<PairSpec>,
    },
    Muller {
        player: Player,
        formula: String,
    },
}

impl ObjectiveSpec {
    pub fn player(&self) -> Player {
        match self {
            ObjectiveSpec::Buchi { player, .. }
            | ObjectiveSpec::CoBuchi { player, .. }
            | ObjectiveSpec::Parity { player, .. }
            | ObjectiveSpec::Streett { player, .. }
            | ObjectiveSpec::Rabin { player, .. }
            | ObjectiveSpec::Muller { player, .. } => *player,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub f: Vec<String>,
    pub g: Vec<String>,
}

/// 1-based line of the first occurrence of `needle`, or 1.
fn locate(text: &str, needle: &str) -> usize {
    text.lines().position(|l| l.contains(needle)).map_or(1, |i| i + 1)
}

fn locate_state(text: &str, name: &str) -> usize {
    locate(text, &format!("\"{name}\""))
}

fn arena_line(text: &str, e: &ArenaError) -> usize {
    match e {
        ArenaError::DeadEndState(s)
        | ArenaError::UnknownOwner(s)
        | ArenaError::DuplicateState(s)
        | ArenaError::UnknownState(s) => locate_state(text, s),
        ArenaError::DanglingEdge(a, b) => {
            let quoted = |s: &str| format!("\"{s}\"");
            text.lines()
                .position(|l| l.contains(&quoted(a)) && l.contains(&quoted(b)) && l.contains('['))
                .map_or_else(|| locate_state(text, b), |i| i + 1)
        }
        ArenaError::PlayerOutOfRange(_) => locate(text, "\"owner\""),
        ArenaError::NoStates | ArenaError::InvalidLasso(_) => locate(text, "\"states\""),
    }
}

/// Parses and validates a game given as JSON text.
pub fn parse_game(text: &str) -> Result<Game, FormatError> {
    let file: GameFile = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line().max(1),
        reason: e.to_string(),
    })?;
    let raw = RawArena {
        players: file.players,
        states: file.states.clone(),
        owner: file.owner.iter().map(|(k, &v)| (k.clone(), v)).collect(),
        edges: file.edges.clone(),
    };
    if let Some(unknown) = file.owner.keys().find(|k| !file.states.contains(k)) {
        return Err(FormatError::Arena {
            line: locate_state(text, unknown),
            source: ArenaError::UnknownState(unknown.clone()),
        });
    }
    let arena = validate_arena(&raw).map_err(|e| FormatError::Arena {
        line: arena_line(text, &e),
        source: e,
    })?;
    let objectives = profile_from_specs(&arena, &file.objectives, text)?;
    Ok(Game { arena, objectives })
}

pub fn parse_game_file(path: impl AsRef<Path>) -> Result<Game, FormatError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_game(&text)
}

fn profile_from_specs(arena: &GameArena, specs: &[ObjectiveSpec], text: &str) -> Result<Vec<Objective>, FormatError> {
    let n = arena.players();
    let mut slots: Vec<Option<Objective>> = vec![None; n];
    for spec in specs {
        let p = spec.player();
        let line = locate(text, &format!("\"player\": {p}"));
        if p == 0 || p > n {
            return Err(FormatError::Parse {
                line,
                reason: format!("objective for player {p} in a {n}-player game"),
            });
        }
        if slots[p - 1].is_some() {
            return Err(FormatError::Parse {
                line,
                reason: format!("second objective for player {p}"),
            });
        }
        slots[p - 1] = Some(objective_from_spec(arena, spec, text, line)?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| FormatError::Parse {
                line: locate(text, "\"objectives\""),
                reason: format!("no objective for player {}", i + 1),
            })
        })
        .collect()
}

fn objective_from_spec(
    arena: &GameArena,
    spec: &ObjectiveSpec,
    text: &str,
    line: usize,
) -> Result<Objective, FormatError> {
    let set = |names: &[String]| -> Result<StateSet, FormatError> {
        names
            .iter()
            .map(|s| {
                arena.state_id(s).map_err(|_| FormatError::Parse {
                    line: locate_state(text, s).max(line),
                    reason: format!("unknown state `{s}` in objective"),
                })
            })
            .collect()
    };
    let pairs = |ps: &[PairSpec]| -> Result<Vec<Pair>, FormatError> {
        ps.iter()
            .map(|p| {
                Ok(Pair {
                    f: set(&p.f)?,
                    g: set(&p.g)?,
                })
            })
            .collect()
    };
    Ok(match spec {
        ObjectiveSpec::Buchi { states, .. } => Objective::Buchi(set(states)?),
        ObjectiveSpec::CoBuchi { states, .. } => Objective::CoBuchi(set(states)?),
        ObjectiveSpec::Parity { colors, .. } => {
            let mut out = vec![None; arena.num_states()];
            for (name, &c) in colors {
                let s = arena.state_id(name).map_err(|_| FormatError::Parse {
                    line,
                    reason: format!("unknown state `{name}` in colouring"),
                })?;
                out[s] = Some(c);
            }
            if let Some(s) = out.iter().position(Option::is_none) {
                return Err(FormatError::Parse {
                    line,
                    reason: format!("state `{}` has no colour", arena.name(s)),
                });
            }
            Objective::Parity(out.into_iter().flatten().collect())
        }
        ObjectiveSpec::Streett { pairs: ps, .. } => Objective::Streett(pairs(ps)?),
        ObjectiveSpec::Rabin { pairs: ps, .. } => Objective::Rabin(pairs(ps)?),
        ObjectiveSpec::Muller { formula, .. } => {
            Objective::Muller(Formula::parse(arena, formula).map_err(|e| FormatError::Parse {
                line: locate(text, formula).max(line),
                reason: e.to_string(),
            })?)
        }
    })
}

fn names(arena: &GameArena, set: &StateSet) -> Vec<String> {
    set.iter().map(|&s| arena.name(s).to_string()).collect()
}

fn spec_of(arena: &GameArena, player: Player, o: &Objective) -> ObjectiveSpec {
    let pairs = |ps: &[Pair]| {
        ps.iter()
            .map(|p| PairSpec {
                f: names(arena, &p.f),
                g: names(arena, &p.g),
            })
            .collect()
    };
    match o {
        Objective::Buchi(b) => ObjectiveSpec::Buchi {
            player,
            states: names(arena, b),
        },
        Objective::CoBuchi(c) => ObjectiveSpec::CoBuchi {
            player,
            states: names(arena, c),
        },
        Objective::Parity(p) => ObjectiveSpec::Parity {
            player,
            colors: p
                .iter()
                .enumerate()
                .map(|(s, &c)| (arena.name(s).to_string(), c))
                .collect(),
        },
        Objective::Streett(ps) => ObjectiveSpec::Streett {
            player,
            pairs: pairs(ps),
        },
        Objective::Rabin(ps) => ObjectiveSpec::Rabin {
            player,
            pairs: pairs(ps),
        },
        Objective::Muller(f) => ObjectiveSpec::Muller {
            player,
            formula: f.display(arena).to_string(),
        },
    }
}

impl GameFile {
    pub fn from_game(game: &Game) -> GameFile {
        let a = &game.arena;
        GameFile {
            players: a.players(),
            states: a.names().to_vec(),
            owner: a.states().map(|s| (a.name(s).to_string(), a.owner(s))).collect(),
            edges: a
                .edges()
                .map(|(x, y)| (a.name(x).to_string(), a.name(y).to_string()))
                .collect(),
            objectives: game
                .objectives
                .iter()
                .enumerate()
                .map(|(i, o)| spec_of(a, i + 1, o))
                .collect(),
        }
    }
}

/// Pretty-printed JSON for a game; [`parse_game`] reads it back.
pub fn serialize_game(game: &Game) -> String {
    serde_json::to_string_pretty(&GameFile::from_game(game)).expect("game files serialise")
}

/// Builds an objective expression over the players' objectives: `p1..pn`
/// stand for `φ_1..φ_n`, combined with `!`, `&`, `|`, parentheses, `true`
/// and `false`.
pub fn parse_profile_expr(text: &str, objectives: &[Objective]) -> Result<ObjectiveExpr, FormatError> {
    let expr = syntax::parse(text).map_err(|e| FormatError::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    fn lower(e: &BoolExpr, objectives: &[Objective]) -> Result<ObjectiveExpr, String> {
        Ok(match e {
            BoolExpr::Const(true) => ObjectiveExpr::all_plays(),
            BoolExpr::Const(false) => ObjectiveExpr::no_play(),
            BoolExpr::Atom(a) => {
                let i: usize = a
                    .strip_prefix('p')
                    .and_then(|d| d.parse().ok())
                    .filter(|&i| i >= 1 && i <= objectives.len())
                    .ok_or_else(|| format!("`{a}` is not one of p1..p{}", objectives.len()))?;
                objectives[i - 1].clone().into()
            }
            BoolExpr::Not(x) => ObjectiveExpr::not(lower(x, objectives)?),
            BoolExpr::And(xs) => ObjectiveExpr::And(xs.iter().map(|x| lower(x, objectives)).collect::<Result<_, _>>()?),
            BoolExpr::Or(xs) => ObjectiveExpr::Or(xs.iter().map(|x| lower(x, objectives)).collect::<Result<_, _>>()?),
        })
    }
    lower(&expr, objectives).map_err(|reason| FormatError::Parse { line: 1, reason })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub start: String,
    pub constraint: String,
    pub strategies: Vec<MachineSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<WitnessMetadata>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineSpec {
    pub player: Player,
    pub memory: Vec<String>,
    pub initial: String,
    pub update: Vec<UpdateRow>,
    #[serde(rename = "move")]
    pub moves: Vec<MoveRow>,
}

/// In memory `memory`, reading `state` leads to memory `next`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpdateRow {
    pub memory: String,
    pub state: String,
    pub next: String,
}

/// In memory `memory` at owned state `state`, move to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRow {
    pub memory: String,
    pub state: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessMetadata {
    pub outcome_stem: Vec<String>,
    pub outcome_cycle: Vec<String>,
    pub payoff: String,
    /// Memory of the retaliation strategy against each player, in player
    /// order, before minimisation.
    pub retaliation_memory: Vec<usize>,
}

fn memory_label(m: usize) -> String {
    format!("m{m}")
}

fn machine_spec(a: &GameArena, st: &MooreStrategy) -> MachineSpec {
    let mut update = Vec::new();
    let mut moves = Vec::new();
    for m in 0..st.memory_size() {
        for s in a.states() {
            update.push(UpdateRow {
                memory: memory_label(m),
                state: a.name(s).to_string(),
                next: memory_label(st.update(m, s)),
            });
            if let Some(t) = st.next_state(m, s) {
                moves.push(MoveRow {
                    memory: memory_label(m),
                    state: a.name(s).to_string(),
                    to: a.name(t).to_string(),
                });
            }
        }
    }
    MachineSpec {
        player: st.player(),
        memory: (0..st.memory_size()).map(memory_label).collect(),
        initial: memory_label(st.initial()),
        update,
        moves,
    }
}

fn state_names(a: &GameArena, xs: &[StateId]) -> Vec<String> {
    xs.iter().map(|&s| a.name(s).to_string()).collect()
}

/// The witness as a table-based JSON document.
pub fn witness_file(a: &GameArena, w: &Witness, start: StateId, v: &Constraint) -> WitnessFile {
    WitnessFile {
        start: a.name(start).to_string(),
        constraint: v.to_string(),
        strategies: w.profile.strategies().iter().map(|st| machine_spec(a, st)).collect(),
        metadata: Some(WitnessMetadata {
            outcome_stem: state_names(a, &w.outcome.stem),
            outcome_cycle: state_names(a, &w.outcome.cycle),
            payoff: w.payoff.to_string(),
            retaliation_memory: w.retaliation_memory.clone(),
        }),
    }
}

pub fn serialize_witness(a: &GameArena, w: &Witness, start: StateId, v: &Constraint) -> String {
    serde_json::to_string_pretty(&witness_file(a, w, start, v)).expect("witness files serialise")
}

/// Reads a profile back from a witness file; rows may come in any order
/// but must cover every memory/state combination.
pub fn parse_witness(a: &GameArena, text: &str) -> Result<(WitnessFile, StrategyProfile), FormatError> {
    let file: WitnessFile = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line().max(1),
        reason: e.to_string(),
    })?;
    let n = a.num_states();
    let mut strategies = Vec::new();
    for spec in &file.strategies {
        let fail = |needle: &str, reason: String| FormatError::Parse {
            line: locate(text, needle),
            reason,
        };
        let mem = |label: &str| {
            spec.memory
                .iter()
                .position(|m| m == label)
                .ok_or_else(|| fail(label, format!("unknown memory `{label}` for player {}", spec.player)))
        };
        let state = |name: &str| {
            a.state_id(name)
                .map_err(|_| fail(name, format!("unknown state `{name}`")))
        };
        let size = spec.memory.len();
        let mut update = vec![None; size * n];
        for row in &spec.update {
            update[mem(&row.memory)? * n + state(&row.state)?] = Some(mem(&row.next)?);
        }
        let mut moves = vec![None; size * n];
        for row in &spec.moves {
            moves[mem(&row.memory)? * n + state(&row.state)?] = Some(state(&row.to)?);
        }
        let update = update.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
            fail(
                "\"update\"",
                format!("incomplete update table for player {}", spec.player),
            )
        })?;
        let st = MooreStrategy::new(a, spec.player, size, mem(&spec.initial)?, update, moves)
            .map_err(|e: SeError| fail(&format!("\"player\": {}", spec.player), e.to_string()))?;
        strategies.push(st);
    }
    let profile = StrategyProfile::new(a, strategies).map_err(|e| FormatError::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    Ok((file, profile))
}

/// The outcome recorded in a witness file's metadata, if any.
pub fn recorded_outcome(a: &GameArena, file: &WitnessFile) -> Option<Lasso> {
    let meta = file.metadata.as_ref()?;
    let ids = |xs: &[String]| xs.iter().map(|x| a.state_id(x).ok()).collect::<Option<Vec<_>>>();
    Lasso::new(a, ids(&meta.outcome_stem)?, ids(&meta.outcome_cycle)?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_arena, fig1_objectives, FIG1_GAME};
    use crate::secure_eq::build_witness;

    #[test]
    fn bundled_fig1() {
        let g = parse_game(FIG1_GAME).unwrap();
        assert_eq!(g.arena, fig1_arena());
        assert_eq!(g.objectives, fig1_objectives().to_vec());
    }

    #[test]
    fn round_trip() {
        let g = parse_game(FIG1_GAME).unwrap();
        assert_eq!(parse_game(&serialize_game(&g)).unwrap(), g);
        let mut g2 = g.clone();
        g2.objectives[0] = Objective::Parity(vec![0, 1, 2, 3, 4, 5]);
        g2.objectives[1] = Objective::Muller(Formula::parse(&g.arena, "(s0 | s1) & !s5").unwrap());
        g2.objectives[2] = Objective::Rabin(vec![Pair::new([0], [1, 2])]);
        assert_eq!(parse_game(&serialize_game(&g2)).unwrap(), g2);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = FIG1_GAME.replace(
            "{\"player\": 3, \"type\": \"buchi\", \"states\": [\"s1\", \"s3\"]}",
            "{\"player\": 4, \"type\": \"buchi\", \"states\": [\"s1\"]}",
        );
        let e = parse_game(&bad).unwrap_err();
        assert!(matches!(e, FormatError::Parse { .. }), "{e}");
        assert_eq!(e.line(), Some(14));
        let e = parse_game(&FIG1_GAME.replace("[\"s5\", \"s5\"]", "[\"s5\", \"s9\"]")).unwrap_err();
        assert!(
            matches!(
                e,
                FormatError::Arena {
                    line: 9,
                    source: ArenaError::DanglingEdge(..)
                }
            ),
            "{e}"
        );
        let e = parse_game("{\"players\": 1,\n \"states\": [}").unwrap_err();
        assert_eq!(e.line(), Some(2));
    }

    #[test]
    fn profile_expressions() {
        let phi = fig1_objectives();
        let e = parse_profile_expr("(p1 & p2 & p3) | !p3", &phi).unwrap();
        let [p1, p2, p3] = phi.clone();
        assert_eq!(
            e,
            ObjectiveExpr::Or(vec![
                ObjectiveExpr::And(vec![p1.into(), p2.into(), p3.clone().into()]),
                ObjectiveExpr::not(p3)
            ])
        );
        assert!(parse_profile_expr("p4", &phi).is_err());
        assert!(parse_profile_expr("p1 &", &phi).is_err());
    }

    #[test]
    fn witness_round_trip() {
        let a = fig1_arena();
        let v = Constraint::parse("111", 3).unwrap();
        let w = build_witness(&a, &fig1_objectives(), "s0", &v).unwrap();
        let text = serialize_witness(&a, &w, 0, &v);
        let (file, profile) = parse_witness(&a, &text).unwrap();
        assert_eq!(profile, w.profile);
        assert_eq!(recorded_outcome(&a, &file), Some(w.outcome));
    }
}
