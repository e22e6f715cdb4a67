//! Secure equilibria in multi-player games on graphs.
//!
//! Each player of a finite arena has an ω-regular objective. A strategy
//! profile is a secure equilibrium when no player can deviate and either
//! gain, or keep their own payoff while someone else loses. This crate
//! decides whether a secure equilibrium with a prescribed payoff profile
//! exists from a given state, and synthesises one as finite Moore machines.
//!
//! * [`arena`]: arenas, validation, sub-arenas, lasso plays.
//! * [`objectives`]: Büchi, co-Büchi, parity, Streett, Rabin and Muller
//!   objectives, Boolean combinations, encodings between classes.
//! * [`zero_sum`]: coalition and cooperative winning regions.
//! * [`secure_eq`]: the decision procedure and witness construction.
//! * [`oracle`]: brute-force checks used to validate the solvers.
//! * [`format`]: JSON game and witness files.

pub mod arena;
pub mod cli;
pub mod fixtures;
pub mod format;
pub mod objectives;
pub mod oracle;
pub mod secure_eq;
pub mod syntax;
pub mod zero_sum;
