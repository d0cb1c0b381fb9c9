//! Shared numeric tolerances.
//!
//! Probability tables are exact tabular data, so normalization checks use a
//! tight absolute tolerance; quantities produced by backward induction
//! accumulate one stage-game error per step and are checked against looser
//! bounds that scale with the horizon.

/// Absolute tolerance for probability-vector normalization checks.
pub const PROB_TOL: f64 = 1e-12;

/// Tolerance for forward-propagated quantities (occupancies, beliefs,
/// Bellman residuals).
pub const PROPAGATION_TOL: f64 = 1e-10;

/// Default certified-exploitability tolerance for stage-game solves.
/// Planner-level guarantees degrade linearly in the horizon: H * tol.
pub const STAGE_GAME_TOL: f64 = 1e-9;
