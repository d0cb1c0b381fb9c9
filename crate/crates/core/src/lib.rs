//! Core library for posterior-sampling reinforcement learning in two-player
//! zero-sum Markov games.
//!
//! The crate covers four layers:
//!
//! - domain types for fully observable (FOMG) and partially observable (POMG)
//!   tabular games, policies, trajectories, and finite model classes ([`game`]);
//! - exact solvers: zero-sum matrix games with an exploitability certificate
//!   ([`matrix_game`]), Nash value iteration and best responses for FOMGs
//!   ([`fomg`]), and public-belief backward induction for small
//!   common-observation POMGs ([`pomg`]);
//! - the optimism-weighted exponential-weights posterior over a finite model
//!   class ([`posterior`]) and the three learner drivers built on it
//!   ([`learners`]);
//! - benchmark game generators ([`envs`]) and diagnostics: divergences, the
//!   generalized eluder coefficient (GEC) inequality checker, and the
//!   prior-coverage quantity omega ([`diagnostics`]).
//!
//! All probability tables are 64-bit floats validated against absolute
//! tolerances (see [`tol`]). Every randomized routine takes an explicit RNG so
//! runs are reproducible; [`rng`] provides per-purpose independent streams.

pub mod diagnostics;
pub mod envs;
pub mod error;
pub mod fomg;
pub mod game;
pub mod learners;
pub mod linalg;
pub mod matrix_game;
pub mod pomg;
pub mod posterior;
pub mod prob;
pub mod rng;
pub mod tol;

pub use error::CoreError;
pub use game::{FomgModel, HistoryPolicy, HistoryTree, MarkovPolicy, ModelClass, PomgModel};
pub use matrix_game::{solve_matrix_game, MatrixGameSolution};
