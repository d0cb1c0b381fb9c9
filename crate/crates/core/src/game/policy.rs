//! Policies: Markov (state-conditional) for observable games and
//! history-conditional for partially observable ones.

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::game::history::HistoryTree;
use crate::prob::{random_distribution, validate_distribution_std};

/// One player's Markov policy: a distribution over that player's actions
/// for every `(h, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovPolicy {
    pub horizon: usize,
    pub num_states: usize,
    pub num_actions: usize,
    /// Flat `[h][s][action]`.
    pub probs: Vec<f64>,
}

impl MarkovPolicy {
    pub fn new(horizon: usize, num_states: usize, num_actions: usize, probs: Vec<f64>) -> Result<Self> {
        let p = Self {
            horizon,
            num_states,
            num_actions,
            probs,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn uniform(horizon: usize, num_states: usize, num_actions: usize) -> Self {
        Self {
            horizon,
            num_states,
            num_actions,
            probs: vec![1.0 / num_actions as f64; horizon * num_states * num_actions],
        }
    }

    /// Fresh conditional distributions at every `(h, s)`.
    pub fn random<R: Rng + ?Sized>(
        horizon: usize,
        num_states: usize,
        num_actions: usize,
        rng: &mut R,
    ) -> Self {
        let mut probs = Vec::with_capacity(horizon * num_states * num_actions);
        for _ in 0..horizon * num_states {
            probs.extend(random_distribution(num_actions, rng));
        }
        Self {
            horizon,
            num_states,
            num_actions,
            probs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.probs.len() != self.horizon * self.num_states * self.num_actions {
            return Err(CoreError::DimensionMismatch(format!(
                "policy table has {} entries, expected {}",
                self.probs.len(),
                self.horizon * self.num_states * self.num_actions
            )));
        }
        for h in 0..self.horizon {
            for s in 0..self.num_states {
                validate_distribution_std(self.row(h, s), &format!("policy row (h={h}, s={s})"))?;
            }
        }
        Ok(())
    }

    #[inline]
    pub fn row(&self, h: usize, s: usize) -> &[f64] {
        let base = (h * self.num_states + s) * self.num_actions;
        &self.probs[base..base + self.num_actions]
    }

    #[inline]
    pub fn row_mut(&mut self, h: usize, s: usize) -> &mut [f64] {
        let base = (h * self.num_states + s) * self.num_actions;
        &mut self.probs[base..base + self.num_actions]
    }
}

/// A Markov policy pair `(pi, nu)` for the max and min players.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovJointPolicy {
    pub pi: MarkovPolicy,
    pub nu: MarkovPolicy,
}

/// One player's history-dependent policy: a distribution over that player's
/// actions at every non-root node of a [`HistoryTree`].
///
/// Decisions happen after each observation, so the root (the empty history)
/// carries no distribution; its slot is kept empty to preserve node-id
/// indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryPolicy {
    pub num_actions: usize,
    /// Indexed by node id; `probs[0]` (the root) is empty.
    pub probs: Vec<Vec<f64>>,
}

impl HistoryPolicy {
    pub fn uniform(tree: &HistoryTree, num_actions: usize) -> Self {
        let u = vec![1.0 / num_actions as f64; num_actions];
        let probs = (0..tree.nodes.len())
            .map(|id| if id == 0 { Vec::new() } else { u.clone() })
            .collect();
        Self { num_actions, probs }
    }

    pub fn random<R: Rng + ?Sized>(tree: &HistoryTree, num_actions: usize, rng: &mut R) -> Self {
        let probs = (0..tree.nodes.len())
            .map(|id| {
                if id == 0 {
                    Vec::new()
                } else {
                    random_distribution(num_actions, rng)
                }
            })
            .collect();
        Self { num_actions, probs }
    }

    pub fn validate(&self, tree: &HistoryTree) -> Result<()> {
        if self.probs.len() != tree.nodes.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "policy covers {} nodes, tree has {}",
                self.probs.len(),
                tree.nodes.len()
            )));
        }
        for (id, p) in self.probs.iter().enumerate().skip(1) {
            if p.len() != self.num_actions {
                return Err(CoreError::DimensionMismatch(format!(
                    "node {id}: expected {} action probabilities, got {}",
                    self.num_actions,
                    p.len()
                )));
            }
            validate_distribution_std(p, &format!("history policy at node {id}"))?;
        }
        Ok(())
    }

    #[inline]
    pub fn at(&self, node: usize) -> &[f64] {
        &self.probs[node]
    }
}
