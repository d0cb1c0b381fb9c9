//! Executed episode records.

use crate::error::{CoreError, Result};
use crate::game::model::{FomgModel, PomgModel};

/// One step of an observable-game episode: `(s_h, a_h, b_h)` plus the reward
/// received. The successor state is the next step's `s` (or `final_state`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FomgStep {
    pub state: usize,
    pub action_max: usize,
    pub action_min: usize,
    pub reward: f64,
}

/// A full `H`-step episode in an observable game.
#[derive(Debug, Clone, PartialEq)]
pub struct FomgTrajectory {
    pub steps: Vec<FomgStep>,
    pub final_state: usize,
}

impl FomgTrajectory {
    pub fn episode_return(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    /// Successor state of step `h` (0-based).
    #[inline]
    pub fn next_state(&self, h: usize) -> usize {
        if h + 1 < self.steps.len() {
            self.steps[h + 1].state
        } else {
            self.final_state
        }
    }

    pub fn validate(&self, model: &FomgModel) -> Result<()> {
        if self.steps.len() != model.horizon {
            return Err(CoreError::MalformedTrajectory(format!(
                "{} steps, expected horizon {}",
                self.steps.len(),
                model.horizon
            )));
        }
        for (h, st) in self.steps.iter().enumerate() {
            if st.state >= model.num_states
                || st.action_max >= model.num_actions_max
                || st.action_min >= model.num_actions_min
            {
                return Err(CoreError::MalformedTrajectory(format!(
                    "index out of bounds at step {h}"
                )));
            }
        }
        if self.final_state >= model.num_states {
            return Err(CoreError::MalformedTrajectory("final state out of bounds".into()));
        }
        Ok(())
    }
}

/// One step of a partially observable episode: `(o_h, a_h, b_h)` plus reward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PomgStep {
    pub obs: usize,
    pub action_max: usize,
    pub action_min: usize,
    pub reward: f64,
}

/// A full `H`-step episode in a partially observable game; latent states are
/// not recorded because the learner never sees them.
#[derive(Debug, Clone, PartialEq)]
pub struct PomgTrajectory {
    pub steps: Vec<PomgStep>,
}

impl PomgTrajectory {
    pub fn episode_return(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    pub fn validate(&self, model: &PomgModel) -> Result<()> {
        if self.steps.len() != model.horizon {
            return Err(CoreError::MalformedTrajectory(format!(
                "{} steps, expected horizon {}",
                self.steps.len(),
                model.horizon
            )));
        }
        for (h, st) in self.steps.iter().enumerate() {
            if st.obs >= model.num_obs
                || st.action_max >= model.num_actions_max
                || st.action_min >= model.num_actions_min
            {
                return Err(CoreError::MalformedTrajectory(format!(
                    "index out of bounds at step {h}"
                )));
            }
        }
        Ok(())
    }
}
