//! Tabular game models.
//!
//! Probability tables are stored flat in row-major order with the index
//! order given in each accessor, which is also the order used by the JSON
//! schema. Models are immutable after construction and safe to share
//! read-only across parallel runs.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::prob::validate_distribution_std;

/// A finite episodic two-player zero-sum Markov game with observable states.
///
/// Specified by horizon `H`, state count `S`, per-player action counts
/// `A`/`B`, a per-step transition kernel `P_h(s'|s,a,b)`, deterministic
/// rewards `r_h(s,a,b)` in `[0,1]`, and a fixed initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct FomgModel {
    pub horizon: usize,
    pub num_states: usize,
    pub num_actions_max: usize,
    pub num_actions_min: usize,
    /// Flat `[h][s][a][b][s']` kernel; each `(h,s,a,b)` row is a distribution over `s'`.
    pub transition: Vec<f64>,
    /// Flat `[h][s][a][b]` rewards in `[0,1]`.
    pub reward: Vec<f64>,
    pub initial_state: usize,
}

impl FomgModel {
    pub fn new(
        horizon: usize,
        num_states: usize,
        num_actions_max: usize,
        num_actions_min: usize,
        transition: Vec<f64>,
        reward: Vec<f64>,
        initial_state: usize,
    ) -> Result<Self> {
        let m = Self {
            horizon,
            num_states,
            num_actions_max,
            num_actions_min,
            transition,
            reward,
            initial_state,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let (h, s, a, b) = (
            self.horizon,
            self.num_states,
            self.num_actions_max,
            self.num_actions_min,
        );
        if h == 0 || s == 0 || a == 0 || b == 0 {
            return Err(CoreError::InvalidModel(
                "horizon, state and action counts must be positive".into(),
            ));
        }
        if self.transition.len() != h * s * a * b * s {
            return Err(CoreError::InvalidModel(format!(
                "transition table has {} entries, expected {}",
                self.transition.len(),
                h * s * a * b * s
            )));
        }
        if self.reward.len() != h * s * a * b {
            return Err(CoreError::InvalidModel(format!(
                "reward table has {} entries, expected {}",
                self.reward.len(),
                h * s * a * b
            )));
        }
        if self.initial_state >= s {
            return Err(CoreError::InvalidModel(format!(
                "initial state {} out of range (S = {s})",
                self.initial_state
            )));
        }
        for hh in 0..h {
            for ss in 0..s {
                for aa in 0..a {
                    for bb in 0..b {
                        validate_distribution_std(
                            self.transition_row(hh, ss, aa, bb),
                            &format!("transition row (h={hh}, s={ss}, a={aa}, b={bb})"),
                        )?;
                    }
                }
            }
        }
        for (i, &r) in self.reward.iter().enumerate() {
            if !(0.0..=1.0).contains(&r) {
                return Err(CoreError::InvalidModel(format!(
                    "reward entry {i} is {r}, outside [0,1]"
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn transition_row(&self, h: usize, s: usize, a: usize, b: usize) -> &[f64] {
        let s_n = self.num_states;
        let base = (((h * s_n + s) * self.num_actions_max + a) * self.num_actions_min + b) * s_n;
        &self.transition[base..base + s_n]
    }

    #[inline]
    pub fn reward_at(&self, h: usize, s: usize, a: usize, b: usize) -> f64 {
        self.reward[((h * self.num_states + s) * self.num_actions_max + a) * self.num_actions_min + b]
    }
}

/// A finite episodic zero-sum Markov game with a latent state and a shared
/// observation channel.
///
/// The tuple is `(mu1, P, O)` plus observation-based rewards: an initial
/// latent-state distribution, per-step latent transitions `P_h(s'|s,a,b)`,
/// emissions `O_h(o|s)`, and deterministic rewards `r_h(o,a,b)` in `[0,1]`.
/// Both players observe the common `o_h` and both action histories, so all
/// information is public apart from the latent state itself.
#[derive(Debug, Clone, PartialEq)]
pub struct PomgModel {
    pub horizon: usize,
    pub num_states: usize,
    pub num_obs: usize,
    pub num_actions_max: usize,
    pub num_actions_min: usize,
    /// Initial latent-state distribution.
    pub mu1: Vec<f64>,
    /// Flat `[h][s][a][b][s']` latent kernel.
    pub transition: Vec<f64>,
    /// Flat `[h][s][o]` emission kernel; each `(h,s)` row is a distribution over `o`.
    pub emission: Vec<f64>,
    /// Flat `[h][o][a][b]` rewards in `[0,1]`.
    pub reward: Vec<f64>,
}

impl PomgModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        horizon: usize,
        num_states: usize,
        num_obs: usize,
        num_actions_max: usize,
        num_actions_min: usize,
        mu1: Vec<f64>,
        transition: Vec<f64>,
        emission: Vec<f64>,
        reward: Vec<f64>,
    ) -> Result<Self> {
        let m = Self {
            horizon,
            num_states,
            num_obs,
            num_actions_max,
            num_actions_min,
            mu1,
            transition,
            emission,
            reward,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let (h, s, o, a, b) = (
            self.horizon,
            self.num_states,
            self.num_obs,
            self.num_actions_max,
            self.num_actions_min,
        );
        if h == 0 || s == 0 || o == 0 || a == 0 || b == 0 {
            return Err(CoreError::InvalidModel(
                "horizon, state, observation and action counts must be positive".into(),
            ));
        }
        if self.mu1.len() != s {
            return Err(CoreError::InvalidModel("mu1 length != S".into()));
        }
        if self.transition.len() != h * s * a * b * s {
            return Err(CoreError::InvalidModel("transition table size mismatch".into()));
        }
        if self.emission.len() != h * s * o {
            return Err(CoreError::InvalidModel("emission table size mismatch".into()));
        }
        if self.reward.len() != h * o * a * b {
            return Err(CoreError::InvalidModel("reward table size mismatch".into()));
        }
        validate_distribution_std(&self.mu1, "mu1")?;
        for hh in 0..h {
            for ss in 0..s {
                validate_distribution_std(
                    self.emission_row(hh, ss),
                    &format!("emission row (h={hh}, s={ss})"),
                )?;
                for aa in 0..a {
                    for bb in 0..b {
                        validate_distribution_std(
                            self.transition_row(hh, ss, aa, bb),
                            &format!("transition row (h={hh}, s={ss}, a={aa}, b={bb})"),
                        )?;
                    }
                }
            }
        }
        for (i, &r) in self.reward.iter().enumerate() {
            if !(0.0..=1.0).contains(&r) {
                return Err(CoreError::InvalidModel(format!(
                    "reward entry {i} is {r}, outside [0,1]"
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn transition_row(&self, h: usize, s: usize, a: usize, b: usize) -> &[f64] {
        let s_n = self.num_states;
        let base = (((h * s_n + s) * self.num_actions_max + a) * self.num_actions_min + b) * s_n;
        &self.transition[base..base + s_n]
    }

    #[inline]
    pub fn emission_row(&self, h: usize, s: usize) -> &[f64] {
        let base = (h * self.num_states + s) * self.num_obs;
        &self.emission[base..base + self.num_obs]
    }

    #[inline]
    pub fn reward_at(&self, h: usize, o: usize, a: usize, b: usize) -> f64 {
        self.reward[((h * self.num_obs + o) * self.num_actions_max + a) * self.num_actions_min + b]
    }
}

/// On-disk JSON schema for a model.
///
/// Top-level keys: `kind` ("fomg" | "pomg"), `H`, `S`, `A`, `B`, (`O`),
/// flattened row-major probability arrays, `rewards`, (`mu1`),
/// (`initial_state`). Array index order matches the in-memory layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    pub kind: String,
    #[serde(rename = "H")]
    pub h: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "O", skip_serializing_if = "Option::is_none")]
    pub o: Option<usize>,
    pub transition: Vec<f64>,
    pub rewards: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emission: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<usize>,
}

impl From<&FomgModel> for ModelJson {
    fn from(m: &FomgModel) -> Self {
        ModelJson {
            kind: "fomg".into(),
            h: m.horizon,
            s: m.num_states,
            a: m.num_actions_max,
            b: m.num_actions_min,
            o: None,
            transition: m.transition.clone(),
            rewards: m.reward.clone(),
            emission: None,
            mu1: None,
            initial_state: Some(m.initial_state),
        }
    }
}

impl From<&PomgModel> for ModelJson {
    fn from(m: &PomgModel) -> Self {
        ModelJson {
            kind: "pomg".into(),
            h: m.horizon,
            s: m.num_states,
            a: m.num_actions_max,
            b: m.num_actions_min,
            o: Some(m.num_obs),
            transition: m.transition.clone(),
            rewards: m.reward.clone(),
            emission: Some(m.emission.clone()),
            mu1: Some(m.mu1.clone()),
            initial_state: None,
        }
    }
}

impl ModelJson {
    pub fn into_fomg(self) -> Result<FomgModel> {
        if self.kind != "fomg" {
            return Err(CoreError::InvalidInput(format!(
                "expected kind \"fomg\", got \"{}\"",
                self.kind
            )));
        }
        FomgModel::new(
            self.h,
            self.s,
            self.a,
            self.b,
            self.transition,
            self.rewards,
            self.initial_state.ok_or_else(|| {
                CoreError::InvalidInput("fomg model is missing initial_state".into())
            })?,
        )
    }

    pub fn into_pomg(self) -> Result<PomgModel> {
        if self.kind != "pomg" {
            return Err(CoreError::InvalidInput(format!(
                "expected kind \"pomg\", got \"{}\"",
                self.kind
            )));
        }
        PomgModel::new(
            self.h,
            self.s,
            self.o
                .ok_or_else(|| CoreError::InvalidInput("pomg model is missing O".into()))?,
            self.a,
            self.b,
            self.mu1
                .ok_or_else(|| CoreError::InvalidInput("pomg model is missing mu1".into()))?,
            self.transition,
            self.emission
                .ok_or_else(|| CoreError::InvalidInput("pomg model is missing emission".into()))?,
            self.rewards,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_fomg() -> FomgModel {
        // H=1, S=2, A=B=1, deterministic move to state 1.
        FomgModel::new(1, 2, 1, 1, vec![0.0, 1.0, 0.0, 1.0], vec![0.5, 0.25], 0).unwrap()
    }

    #[test]
    fn validation_catches_bad_rows() {
        let mut m = tiny_fomg();
        m.transition[0] = 0.5;
        assert!(m.validate().is_err());

        let mut m = tiny_fomg();
        m.reward[0] = 1.5;
        assert!(m.validate().is_err());

        let mut m = tiny_fomg();
        m.initial_state = 2;
        assert!(m.validate().is_err());
    }

    #[test]
    fn fomg_json_round_trip_is_bit_identical() {
        let m = FomgModel::new(
            2,
            2,
            2,
            1,
            vec![
                0.30000000000000004,
                0.7,
                0.1,
                0.9,
                1.0,
                0.0,
                0.5,
                0.5,
                0.2,
                0.8,
                0.25,
                0.75,
                1.0 / 3.0,
                2.0 / 3.0,
                0.6,
                0.4,
            ],
            vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
            1,
        )
        .unwrap();
        let text = serde_json::to_string(&ModelJson::from(&m)).unwrap();
        let back: ModelJson = serde_json::from_str(&text).unwrap();
        let m2 = back.into_fomg().unwrap();
        assert_eq!(m.transition, m2.transition);
        assert_eq!(m.reward, m2.reward);
        assert!(m
            .transition
            .iter()
            .zip(&m2.transition)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn pomg_json_round_trip_is_bit_identical() {
        let m = PomgModel::new(
            1,
            2,
            2,
            1,
            1,
            vec![0.5, 0.5],
            vec![0.1, 0.9, 2.0 / 3.0, 1.0 / 3.0],
            vec![0.7, 0.30000000000000004, 0.25, 0.75],
            vec![0.0, 1.0],
        )
        .unwrap();
        let text = serde_json::to_string(&ModelJson::from(&m)).unwrap();
        let m2: PomgModel = serde_json::from_str::<ModelJson>(&text)
            .unwrap()
            .into_pomg()
            .unwrap();
        assert!(m.mu1.iter().zip(&m2.mu1).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert!(m
            .emission
            .iter()
            .zip(&m2.emission)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
        assert!(m
            .transition
            .iter()
            .zip(&m2.transition)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}
