//! The `segames` command line.
//!
//! Exit codes: 0 for yes (or success), 1 for no, 2 for errors. Text output
//! lists state sets in the game file's state order; `--format json` prints
//! one object with `answer`, `region` and `timings` (milliseconds).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arena::{GameArena, Lasso, StateId};
use crate::format::{parse_game_file, parse_profile_expr, parse_witness, serialize_witness, Game};
use crate::oracle::{enumerate_bounded_se, verify_se, BoundedSearch, Verification};
use crate::secure_eq::{analyze, build_witness, Constraint, SeError};
use crate::zero_sum::{coalition_region_with, Region, Route, SolverConfig};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "segames",
    version,
    about = "Secure equilibria in multi-player games on graphs"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Auto,
    Parity,
    Streett,
    Rabin,
    Muller,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Parity => Route::Parity,
            RouteArg::Streett => Route::Streett,
            RouteArg::Rabin => Route::Rabin,
            RouteArg::Muller => Route::Muller,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a game file is well formed.
    Validate { file: PathBuf },
    /// States from which a coalition can force an objective expression.
    Region {
        file: PathBuf,
        /// Comma-separated players, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        coalition: Vec<usize>,
        /// Expression over p1..pn with `!`, `&`, `|` and parentheses.
        #[arg(long)]
        objective: String,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
    },
    /// Is there a secure equilibrium from a state with a given payoff?
    SeExists {
        file: PathBuf,
        #[arg(long)]
        state: String,
        /// One bit per player, player 1 leftmost.
        #[arg(long)]
        constraint: String,
    },
    /// Build a secure equilibrium and write it as a witness file.
    Witness {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        constraint: String,
        /// Destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a witness file is a secure equilibrium from a state.
    Verify {
        file: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        state: String,
    },
    /// Search small-memory profiles for a secure equilibrium.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        constraint: String,
        #[arg(long, default_value_t = 2)]
        memory_bound: usize,
    },
}

struct Report {
    code: i32,
    answer: Value,
    region: Option<Vec<String>>,
    text: String,
    extra: Option<(&'static str, Value)>,
}

struct Timer {
    start: Instant,
    marks: Vec<(&'static str, f64)>,
}

impl Timer {
    fn new() -> Timer {
        Timer {
            start: Instant::now(),
            marks: Vec::new(),
        }
    }

    fn mark(&mut self, what: &'static str) {
        let now = Instant::now();
        self.marks.push((what, (now - self.start).as_secs_f64() * 1000.0));
        self.start = now;
    }

    fn json(&self) -> Value {
        Value::Object(self.marks.iter().map(|&(k, v)| (k.to_string(), json!(v))).collect())
    }
}

type Failure = String;

fn load(path: &Path, timer: &mut Timer) -> Result<Game, Failure> {
    let g = parse_game_file(path).map_err(|e| format!("{}: {e}", path.display()))?;
    timer.mark("parse");
    Ok(g)
}

fn state(a: &GameArena, name: &str) -> Result<StateId, Failure> {
    a.state_id(name).map_err(|e| e.to_string())
}

fn constraint(text: &str, n: usize) -> Result<Constraint, Failure> {
    Constraint::parse(text, n).map_err(|e| e.to_string())
}

fn names(a: &GameArena, r: &Region) -> Vec<String> {
    r.names(a).into_iter().map(str::to_string).collect()
}

fn lasso_text(a: &GameArena, l: &Lasso) -> String {
    let part = |xs: &[StateId]| xs.iter().map(|&s| a.name(s)).collect::<Vec<_>>().join(" ");
    if l.stem.is_empty() {
        format!("({})^ω", part(&l.cycle))
    } else {
        format!("{} ({})^ω", part(&l.stem), part(&l.cycle))
    }
}

fn execute(cmd: Command, timer: &mut Timer) -> Result<Report, Failure> {
    match cmd {
        Command::Validate { file } => {
            let g = load(&file, timer)?;
            let a = &g.arena;
            Ok(Report {
                code: EXIT_YES,
                answer: json!(true),
                region: None,
                text: format!(
                    "ok: {} players, {} states, {} edges\n",
                    a.players(),
                    a.num_states(),
                    a.num_edges()
                ),
                extra: None,
            })
        }
        Command::Region {
            file,
            coalition,
            objective,
            route,
        } => {
            let g = load(&file, timer)?;
            let e = parse_profile_expr(&objective, &g.objectives).map_err(|e| format!("--objective: {e}"))?;
            let r = coalition_region_with(&g.arena, &coalition, &e, route.into(), &SolverConfig::default())
                .map_err(|e| e.to_string())?;
            timer.mark("solve");
            Ok(Report {
                code: EXIT_YES,
                answer: json!(!r.is_empty()),
                text: format!("{}\n", r.display(&g.arena)),
                region: Some(names(&g.arena, &r)),
                extra: Some(("route", json!(r.provenance().to_string()))),
            })
        }
        Command::SeExists {
            file,
            state: s,
            constraint: v,
        } => {
            let g = load(&file, timer)?;
            let s = state(&g.arena, &s)?;
            let v = constraint(&v, g.arena.players())?;
            let an = analyze(&g.arena, &g.objectives, &v, &SolverConfig::default()).map_err(|e| e.to_string())?;
            timer.mark("solve");
            let yes = an.se_v.contains(s);
            Ok(Report {
                code: if yes { EXIT_YES } else { EXIT_NO },
                answer: json!(yes),
                text: format!(
                    "{}\nA_v: {}\nSE region: {}\n",
                    if yes { "yes" } else { "no" },
                    an.a_v.display(&g.arena),
                    an.se_v.display(&g.arena)
                ),
                region: Some(names(&g.arena, &an.se_v)),
                extra: Some(("a_v", json!(names(&g.arena, &an.a_v)))),
            })
        }
        Command::Witness {
            file,
            state: s,
            constraint: v,
            out,
        } => {
            let g = load(&file, timer)?;
            let a = &g.arena;
            let start = state(a, &s)?;
            let v = constraint(&v, a.players())?;
            let w = match build_witness(a, &g.objectives, &s, &v) {
                Ok(w) => w,
                Err(e @ SeError::NoWitness { .. }) => {
                    timer.mark("solve");
                    return Ok(Report {
                        code: EXIT_NO,
                        answer: json!(false),
                        region: None,
                        text: format!("no: {e}\n"),
                        extra: None,
                    });
                }
                Err(e) => return Err(e.to_string()),
            };
            timer.mark("solve");
            let body = serialize_witness(a, &w, start, &v);
            let mut text = String::new();
            match &out {
                Some(path) => {
                    std::fs::write(path, format!("{body}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
                    text.push_str(&format!("wrote {}\n", path.display()));
                }
                None => text.push_str(&format!("{body}\n")),
            }
            text.push_str(&format!(
                "outcome: {}\npayoff: {}\n",
                lasso_text(a, &w.outcome),
                w.payoff
            ));
            Ok(Report {
                code: EXIT_YES,
                answer: json!(true),
                region: None,
                text,
                extra: Some(("witness", serde_json::from_str(&body).expect("own output is JSON"))),
            })
        }
        Command::Verify {
            file,
            witness,
            state: s,
        } => {
            let g = load(&file, timer)?;
            let a = &g.arena;
            let s = state(a, &s)?;
            let body = std::fs::read_to_string(&witness).map_err(|e| format!("{}: {e}", witness.display()))?;
            let (_, profile) = parse_witness(a, &body).map_err(|e| format!("{}: {e}", witness.display()))?;
            let verdict = verify_se(a, &g.objectives, &profile, s).map_err(|e| e.to_string())?;
            timer.mark("verify");
            Ok(match verdict {
                Verification::Secure { payoff } => Report {
                    code: EXIT_YES,
                    answer: json!(true),
                    region: None,
                    text: format!("secure, payoff {payoff}\n"),
                    extra: Some(("payoff", json!(payoff.to_string()))),
                },
                Verification::Deviation(d) => Report {
                    code: EXIT_NO,
                    answer: json!(false),
                    region: None,
                    text: format!(
                        "not secure: player {} can turn payoff {} into {} via {}\n",
                        d.player,
                        d.baseline,
                        d.achievable,
                        lasso_text(a, &d.witness)
                    ),
                    extra: Some((
                        "deviation",
                        json!({
                            "player": d.player,
                            "baseline": d.baseline.to_string(),
                            "achievable": d.achievable.to_string(),
                        }),
                    )),
                },
            })
        }
        Command::Oracle {
            file,
            state: s,
            constraint: v,
            memory_bound,
        } => {
            let g = load(&file, timer)?;
            let a = &g.arena;
            let s = state(a, &s)?;
            let v = constraint(&v, a.players())?;
            let found = enumerate_bounded_se(a, &g.objectives, s, &v, memory_bound).map_err(|e| e.to_string())?;
            timer.mark("search");
            Ok(match found {
                BoundedSearch::Found(p) => {
                    let sizes: Vec<usize> = p.strategies().iter().map(|st| st.memory_size()).collect();
                    Report {
                        code: EXIT_YES,
                        answer: json!(true),
                        region: None,
                        text: format!("found: secure equilibrium with memory sizes {sizes:?}\n"),
                        extra: Some(("memory", json!(sizes))),
                    }
                }
                BoundedSearch::NoneWithinBound => Report {
                    code: EXIT_NO,
                    answer: json!(false),
                    region: None,
                    text: format!(
                        "none within memory bound {memory_bound} (evidence only: larger memory is not searched)\n"
                    ),
                    extra: None,
                },
            })
        }
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let stream: &mut dyn Write = if informational { out } else { err };
            let _ = write!(stream, "{}", e.render());
            return if informational { EXIT_YES } else { EXIT_ERROR };
        }
    };
    let mut timer = Timer::new();
    match execute(cli.command, &mut timer) {
        Ok(r) => {
            let _ = match cli.format {
                OutputFormat::Text => write!(out, "{}", r.text),
                OutputFormat::Json => {
                    let mut doc = json!({
                        "answer": r.answer,
                        "region": r.region,
                        "timings": timer.json(),
                    });
                    if let Some((k, v)) = r.extra {
                        doc[k] = v;
                    }
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("JSON output"))
                }
            };
            r.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}
