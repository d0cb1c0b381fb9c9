//! Exact planning and likelihoods for tiny common-observation POMGs.
//!
//! Both players see the same observations and both action sequences, so the
//! posterior over the latent state given the public history is common
//! knowledge and does not depend on either policy (policy factors cancel in
//! the conditioning). Backward induction over these public beliefs therefore
//! solves the game exactly: each history node carries an `A x B` stage game
//! whose payoff is the immediate reward plus the expected child value. Every
//! plan is certified after the fact by history-tree best-response DP.

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::game::{HistoryPolicy, HistoryTree, PomgModel, PomgStep, PomgTrajectory};
use crate::matrix_game::{solve_matrix_game, Side};
use crate::prob::sample_categorical;

/// Latent-state filter over a history tree for one model.
///
/// `reach[n]` is the do-operator likelihood of node `n`'s history (actions
/// fixed, policies removed); `cond[n]` is the probability of `n`'s
/// observation given its parent's history and the actions on the edge.
/// Unreachable histories are flagged and carry an empty belief.
#[derive(Debug, Clone)]
pub struct BeliefTree {
    pub reach: Vec<f64>,
    pub cond: Vec<f64>,
    /// Belief over latent states at each node; empty when unreachable and at
    /// the root (whose pre-observation belief is just `mu1`).
    pub belief: Vec<Vec<f64>>,
    pub reachable: Vec<bool>,
}

impl BeliefTree {
    /// Forward filter over the whole tree. Exact: beliefs are normalized
    /// one-step Bayes updates of the parent belief.
    pub fn compute(model: &PomgModel, tree: &HistoryTree) -> Result<Self> {
        check_tree(model, tree)?;
        let n = tree.nodes.len();
        let sn = model.num_states;
        let mut reach = vec![0.0_f64; n];
        let mut cond = vec![0.0_f64; n];
        let mut belief: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut reachable = vec![false; n];

        reach[0] = 1.0;
        reachable[0] = true;
        for id in 0..n {
            if !reachable[id] {
                continue;
            }
            let node = &tree.nodes[id];
            if node.depth == tree.horizon {
                continue;
            }
            if node.depth == 0 {
                for o in 0..model.num_obs {
                    let child = tree.root_child(o);
                    let mut unnorm = vec![0.0_f64; sn];
                    for s in 0..sn {
                        unnorm[s] = model.mu1[s] * model.emission_row(0, s)[o];
                    }
                    finish_child(child, unnorm, reach[id], &mut reach, &mut cond, &mut belief, &mut reachable);
                }
            } else {
                let h = node.depth; // transition at step h (0-based index h-1 .. h)
                let parent_belief = belief[id].clone();
                for a in 0..model.num_actions_max {
                    for b in 0..model.num_actions_min {
                        // One-step latent push-through shared by all o'.
                        let mut pushed = vec![0.0_f64; sn];
                        for (s, &w) in parent_belief.iter().enumerate() {
                            if w == 0.0 {
                                continue;
                            }
                            let row = model.transition_row(h - 1, s, a, b);
                            for (s2, &p) in row.iter().enumerate() {
                                pushed[s2] += w * p;
                            }
                        }
                        for o in 0..model.num_obs {
                            let child = tree.child(id, a, b, o);
                            let mut unnorm = vec![0.0_f64; sn];
                            for s2 in 0..sn {
                                unnorm[s2] = pushed[s2] * model.emission_row(h, s2)[o];
                            }
                            finish_child(child, unnorm, reach[id], &mut reach, &mut cond, &mut belief, &mut reachable);
                        }
                    }
                }
            }
        }
        Ok(Self {
            reach,
            cond,
            belief,
            reachable,
        })
    }
}

fn finish_child(
    child: usize,
    unnorm: Vec<f64>,
    parent_reach: f64,
    reach: &mut [f64],
    cond: &mut [f64],
    belief: &mut [Vec<f64>],
    reachable: &mut [bool],
) {
    let total: f64 = unnorm.iter().sum();
    cond[child] = total;
    reach[child] = parent_reach * total;
    if total > 0.0 && parent_reach > 0.0 {
        reachable[child] = true;
        belief[child] = unnorm.into_iter().map(|x| x / total).collect();
    }
}

/// Do-operator likelihood of a trajectory prefix: the probability of the
/// observation sequence with all actions held fixed.
///
/// Runs the forward (alpha) recursion in normalized form with a running
/// log-scale factor, so long prefixes cannot underflow; the brute-force
/// equivalent sums over all latent state sequences.
pub fn trajectory_likelihood(model: &PomgModel, prefix: &[PomgStep]) -> Result<f64> {
    let logs = prefix_log_likelihoods_for(model, prefix)?;
    Ok(logs.last().map_or(1.0, |&l| l.exp()))
}

/// Log do-likelihoods `log P_h(tau_h)` for every prefix `h = 1..=len`.
/// Entries are `-inf` from the first impossible prefix onward.
pub fn prefix_log_likelihoods_for(model: &PomgModel, steps: &[PomgStep]) -> Result<Vec<f64>> {
    if steps.len() > model.horizon {
        return Err(CoreError::MalformedTrajectory(format!(
            "prefix of length {} exceeds horizon {}",
            steps.len(),
            model.horizon
        )));
    }
    for (h, st) in steps.iter().enumerate() {
        if st.obs >= model.num_obs
            || st.action_max >= model.num_actions_max
            || st.action_min >= model.num_actions_min
        {
            return Err(CoreError::MalformedTrajectory(format!(
                "index out of bounds at step {h}"
            )));
        }
    }
    let sn = model.num_states;
    let mut logs = Vec::with_capacity(steps.len());
    let mut alpha = vec![0.0_f64; sn];
    let mut log_scale = 0.0_f64;
    let mut dead = false;
    for (h, st) in steps.iter().enumerate() {
        let mut unnorm = vec![0.0_f64; sn];
        if h == 0 {
            for s in 0..sn {
                unnorm[s] = model.mu1[s] * model.emission_row(0, s)[st.obs];
            }
        } else {
            let prev = &steps[h - 1];
            for (s, &w) in alpha.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let row = model.transition_row(h - 1, s, prev.action_max, prev.action_min);
                for (s2, &p) in row.iter().enumerate() {
                    unnorm[s2] += w * p;
                }
            }
            for (s2, u) in unnorm.iter_mut().enumerate() {
                *u *= model.emission_row(h, s2)[st.obs];
            }
        }
        let total: f64 = unnorm.iter().sum();
        if dead || total <= 0.0 {
            dead = true;
            logs.push(f64::NEG_INFINITY);
            continue;
        }
        log_scale += total.ln();
        logs.push(log_scale);
        for (a, u) in alpha.iter_mut().zip(unnorm.iter()) {
            *a = *u / total;
        }
    }
    Ok(logs)
}

/// Output of public-belief backward induction on one model.
#[derive(Debug, Clone)]
pub struct PomgPlan {
    /// Game value at the empty history.
    pub nash_value: f64,
    pub pi_star: HistoryPolicy,
    pub nu_star: HistoryPolicy,
    /// Subgame value at every node (0 at unreachable nodes).
    pub node_values: Vec<f64>,
    pub beliefs: BeliefTree,
}

/// Nash equilibrium of the POMG by backward induction over belief nodes.
///
/// At each reachable node the `A x B` stage game `r_h(o, a, b) +
/// E[child value]` is solved to `tol`; unreachable nodes get uniform
/// policies (they never influence the value). The exploitability of the
/// returned pair against history-tree best responses is at most `H * tol`.
pub fn nash_plan_pomg(model: &PomgModel, tree: &HistoryTree, tol: f64) -> Result<PomgPlan> {
    let beliefs = BeliefTree::compute(model, tree)?;
    let (an, bn) = (model.num_actions_max, model.num_actions_min);
    let n = tree.nodes.len();
    let mut values = vec![0.0_f64; n];
    let mut pi = HistoryPolicy::uniform(tree, an);
    let mut nu = HistoryPolicy::uniform(tree, bn);
    let mut stage = vec![0.0_f64; an * bn];

    // Children have larger preorder ids, so a reverse sweep is bottom-up.
    for id in (1..n).rev() {
        if !beliefs.reachable[id] {
            continue;
        }
        let node = &tree.nodes[id];
        let h = node.depth - 1; // 0-based step index of the decision here
        for a in 0..an {
            for b in 0..bn {
                let mut q = model.reward_at(h, node.obs, a, b);
                if node.depth < tree.horizon {
                    for o in 0..model.num_obs {
                        let child = tree.child(id, a, b, o);
                        q += beliefs.cond[child] * values[child];
                    }
                }
                stage[a * bn + b] = q;
            }
        }
        let sol = solve_matrix_game(an, bn, &stage, tol)?;
        values[id] = sol.value;
        pi.probs[id].copy_from_slice(&sol.row_strategy);
        nu.probs[id].copy_from_slice(&sol.col_strategy);
    }
    let nash_value = (0..model.num_obs)
        .map(|o| {
            let c = tree.root_child(o);
            beliefs.cond[c] * values[c]
        })
        .sum();
    Ok(PomgPlan {
        nash_value,
        pi_star: pi,
        nu_star: nu,
        node_values: values,
        beliefs,
    })
}

/// Exact best response to a fixed opponent history policy.
///
/// Beliefs depend only on the public history, so the responder maximizes
/// (or minimizes) through the same filter; opponent actions enter only as
/// mixture weights. Deterministic, lowest-index tie-breaking.
pub fn best_response_pomg(
    model: &PomgModel,
    tree: &HistoryTree,
    beliefs: &BeliefTree,
    opponent: &HistoryPolicy,
    side: Side,
) -> Result<(f64, HistoryPolicy)> {
    let (an, bn) = (model.num_actions_max, model.num_actions_min);
    let (own_n, opp_n) = match side {
        Side::Max => (an, bn),
        Side::Min => (bn, an),
    };
    if opponent.num_actions != opp_n {
        return Err(CoreError::DimensionMismatch(
            "opponent policy action count does not match the model".into(),
        ));
    }
    opponent.validate(tree)?;

    let n = tree.nodes.len();
    let mut values = vec![0.0_f64; n];
    let mut response = HistoryPolicy::uniform(tree, own_n);
    for id in (1..n).rev() {
        if !beliefs.reachable[id] {
            continue;
        }
        let node = &tree.nodes[id];
        let h = node.depth - 1;
        let opp_row = opponent.at(id);
        let mut best = match side {
            Side::Max => f64::NEG_INFINITY,
            Side::Min => f64::INFINITY,
        };
        let mut best_idx = 0;
        for own in 0..own_n {
            let mut q = 0.0;
            for (opp, &w) in opp_row.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let (a, b) = match side {
                    Side::Max => (own, opp),
                    Side::Min => (opp, own),
                };
                let mut t = model.reward_at(h, node.obs, a, b);
                if node.depth < tree.horizon {
                    for o in 0..model.num_obs {
                        let child = tree.child(id, a, b, o);
                        t += beliefs.cond[child] * values[child];
                    }
                }
                q += w * t;
            }
            let better = match side {
                Side::Max => q > best,
                Side::Min => q < best,
            };
            if better {
                best = q;
                best_idx = own;
            }
        }
        values[id] = best;
        let row = &mut response.probs[id];
        row.fill(0.0);
        row[best_idx] = 1.0;
    }
    let value = (0..model.num_obs)
        .map(|o| {
            let c = tree.root_child(o);
            beliefs.cond[c] * values[c]
        })
        .sum();
    Ok((value, response))
}

/// Exact expected return of a history-policy pair: sum over the tree of
/// policy-weighted reach times reward.
pub fn policy_value_pomg(
    model: &PomgModel,
    tree: &HistoryTree,
    beliefs: &BeliefTree,
    pi: &HistoryPolicy,
    nu: &HistoryPolicy,
) -> Result<f64> {
    check_joint(model, tree, pi, nu)?;
    let preach = policy_reach(model, tree, beliefs, pi, nu);
    let mut value = 0.0;
    for (id, node) in tree.nodes.iter().enumerate().skip(1) {
        if preach[id] == 0.0 {
            continue;
        }
        let h = node.depth - 1;
        let pr = pi.at(id);
        let nr = nu.at(id);
        for a in 0..model.num_actions_max {
            for b in 0..model.num_actions_min {
                let w = pr[a] * nr[b];
                if w != 0.0 {
                    value += preach[id] * w * model.reward_at(h, node.obs, a, b);
                }
            }
        }
    }
    Ok(value)
}

/// Joint distribution over depth-`h` trajectories `tau_h` under `(pi, nu)`:
/// atoms are `(node, a, b)` for nodes at depth `h` (in `by_depth` order)
/// crossed with the step-`h` action pair, flattened node-major then `a`
/// then `b`. Sums to 1.
pub fn joint_distribution(
    model: &PomgModel,
    tree: &HistoryTree,
    beliefs: &BeliefTree,
    pi: &HistoryPolicy,
    nu: &HistoryPolicy,
    h: usize,
) -> Result<Vec<f64>> {
    if h == 0 || h > tree.horizon {
        return Err(CoreError::InvalidInput(format!(
            "depth {h} out of range 1..={}",
            tree.horizon
        )));
    }
    check_joint(model, tree, pi, nu)?;
    let preach = policy_reach(model, tree, beliefs, pi, nu);
    let (an, bn) = (model.num_actions_max, model.num_actions_min);
    let nodes = &tree.by_depth[h];
    let mut out = vec![0.0_f64; nodes.len() * an * bn];
    for (k, &id) in nodes.iter().enumerate() {
        if preach[id] == 0.0 {
            continue;
        }
        let pr = pi.at(id);
        let nr = nu.at(id);
        for a in 0..an {
            for b in 0..bn {
                out[(k * an + a) * bn + b] = preach[id] * pr[a] * nr[b];
            }
        }
    }
    Ok(out)
}

/// Policy-weighted reach probability of every node.
fn policy_reach(
    model: &PomgModel,
    tree: &HistoryTree,
    beliefs: &BeliefTree,
    pi: &HistoryPolicy,
    nu: &HistoryPolicy,
) -> Vec<f64> {
    let n = tree.nodes.len();
    let mut preach = vec![0.0_f64; n];
    preach[0] = 1.0;
    for id in 0..n {
        if preach[id] == 0.0 {
            continue;
        }
        let node = &tree.nodes[id];
        if node.depth == tree.horizon {
            continue;
        }
        if node.depth == 0 {
            for o in 0..model.num_obs {
                let child = tree.root_child(o);
                preach[child] = beliefs.cond[child];
            }
        } else {
            let pr = pi.at(id);
            let nr = nu.at(id);
            for a in 0..model.num_actions_max {
                for b in 0..model.num_actions_min {
                    let w = pr[a] * nr[b];
                    if w == 0.0 {
                        continue;
                    }
                    for o in 0..model.num_obs {
                        let child = tree.child(id, a, b, o);
                        preach[child] = preach[id] * w * beliefs.cond[child];
                    }
                }
            }
        }
    }
    preach
}

/// Samples one episode, tracking the history node so history policies can
/// be indexed directly.
pub fn sample_episode<R: Rng + ?Sized>(
    model: &PomgModel,
    tree: &HistoryTree,
    pi: &HistoryPolicy,
    nu: &HistoryPolicy,
    rng: &mut R,
) -> PomgTrajectory {
    let hn = model.horizon;
    let mut steps = Vec::with_capacity(hn);
    let mut s = sample_categorical(&model.mu1, rng);
    let mut o = sample_categorical(model.emission_row(0, s), rng);
    let mut node = tree.root_child(o);
    for h in 0..hn {
        let a = sample_categorical(pi.at(node), rng);
        let b = sample_categorical(nu.at(node), rng);
        let reward = model.reward_at(h, o, a, b);
        steps.push(PomgStep {
            obs: o,
            action_max: a,
            action_min: b,
            reward,
        });
        if h + 1 < hn {
            s = sample_categorical(model.transition_row(h, s, a, b), rng);
            o = sample_categorical(model.emission_row(h + 1, s), rng);
            node = tree.child(node, a, b, o);
        }
    }
    PomgTrajectory { steps }
}

fn check_tree(model: &PomgModel, tree: &HistoryTree) -> Result<()> {
    if tree.horizon != model.horizon
        || tree.num_obs != model.num_obs
        || tree.num_actions_max != model.num_actions_max
        || tree.num_actions_min != model.num_actions_min
    {
        return Err(CoreError::DimensionMismatch(
            "history tree dimensions do not match the model".into(),
        ));
    }
    Ok(())
}

fn check_joint(
    model: &PomgModel,
    tree: &HistoryTree,
    pi: &HistoryPolicy,
    nu: &HistoryPolicy,
) -> Result<()> {
    check_tree(model, tree)?;
    if pi.num_actions != model.num_actions_max || nu.num_actions != model.num_actions_min {
        return Err(CoreError::DimensionMismatch(
            "history policy action counts do not match the model".into(),
        ));
    }
    if pi.probs.len() != tree.nodes.len() || nu.probs.len() != tree.nodes.len() {
        return Err(CoreError::DimensionMismatch(
            "history policy does not cover the tree".into(),
        ));
    }
    Ok(())
}
