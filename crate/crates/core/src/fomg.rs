//! Exact planning in tabular fully observable games.
//!
//! Backward induction solves one zero-sum stage game per `(h, s)`; every
//! stage solve carries the matrix-game exploitability certificate, so the
//! plan as a whole is accurate to `H * tol`.

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::game::{FomgModel, FomgStep, FomgTrajectory, MarkovJointPolicy, MarkovPolicy};
use crate::matrix_game::{solve_matrix_game, Side};
use crate::prob::sample_categorical;

/// Output of Nash value iteration on one model.
#[derive(Debug, Clone)]
pub struct FomgPlan {
    /// Game value from the fixed initial state.
    pub nash_value: f64,
    /// Flat `[h][s][a][b]` stage-game payoffs `r + <P, V_{h+1}>`.
    pub q_values: Vec<f64>,
    /// Flat `[h][s]` state values under the equilibrium.
    pub state_values: Vec<f64>,
    pub pi_star: MarkovPolicy,
    pub nu_star: MarkovPolicy,
}

/// Nash value iteration: solves the stage game at every `(h, s)` from the
/// last step backward. The returned pair `(pi_star, nu_star)` has
/// exploitability at most `H * tol` against exact best responses.
pub fn nash_plan(model: &FomgModel, tol: f64) -> Result<FomgPlan> {
    let (hn, sn, an, bn) = dims(model);
    let mut state_values = vec![0.0_f64; hn * sn];
    let mut q_values = vec![0.0_f64; hn * sn * an * bn];
    let mut pi = MarkovPolicy::uniform(hn, sn, an);
    let mut nu = MarkovPolicy::uniform(hn, sn, bn);
    let mut stage = vec![0.0_f64; an * bn];

    for h in (0..hn).rev() {
        for s in 0..sn {
            for a in 0..an {
                for b in 0..bn {
                    let mut q = model.reward_at(h, s, a, b);
                    if h + 1 < hn {
                        let row = model.transition_row(h, s, a, b);
                        for (s2, &p) in row.iter().enumerate() {
                            q += p * state_values[(h + 1) * sn + s2];
                        }
                    }
                    stage[a * bn + b] = q;
                    q_values[((h * sn + s) * an + a) * bn + b] = q;
                }
            }
            let sol = solve_matrix_game(an, bn, &stage, tol)?;
            state_values[h * sn + s] = sol.value;
            pi.row_mut(h, s).copy_from_slice(&sol.row_strategy);
            nu.row_mut(h, s).copy_from_slice(&sol.col_strategy);
        }
    }

    Ok(FomgPlan {
        nash_value: state_values[model.initial_state],
        q_values,
        state_values,
        pi_star: pi,
        nu_star: nu,
    })
}

/// Exact best response to a fixed opponent policy by backward induction on
/// the induced single-agent problem. `side` names the responder; the policy
/// argument belongs to the other player. Ties break toward the lowest
/// action index, so the response is deterministic.
pub fn best_response(
    model: &FomgModel,
    opponent: &MarkovPolicy,
    side: Side,
) -> Result<(f64, MarkovPolicy)> {
    let (hn, sn, an, bn) = dims(model);
    let (own_n, opp_n) = match side {
        Side::Max => (an, bn),
        Side::Min => (bn, an),
    };
    if opponent.horizon != hn || opponent.num_states != sn || opponent.num_actions != opp_n {
        return Err(CoreError::DimensionMismatch(
            "opponent policy shape does not match the model".into(),
        ));
    }

    let mut values = vec![0.0_f64; sn];
    let mut next = vec![0.0_f64; sn];
    let mut response = MarkovPolicy::uniform(hn, sn, own_n);
    for h in (0..hn).rev() {
        for s in 0..sn {
            let opp = opponent.row(h, s);
            let mut best = match side {
                Side::Max => f64::NEG_INFINITY,
                Side::Min => f64::INFINITY,
            };
            let mut best_idx = 0;
            for own in 0..own_n {
                let mut q = 0.0;
                for (o, &w) in opp.iter().enumerate() {
                    if w == 0.0 {
                        continue;
                    }
                    let (a, b) = match side {
                        Side::Max => (own, o),
                        Side::Min => (o, own),
                    };
                    let mut t = model.reward_at(h, s, a, b);
                    if h + 1 < hn {
                        let row = model.transition_row(h, s, a, b);
                        for (s2, &p) in row.iter().enumerate() {
                            t += p * next[s2];
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
            values[s] = best;
            let row = response.row_mut(h, s);
            row.fill(0.0);
            row[best_idx] = 1.0;
        }
        next.copy_from_slice(&values);
    }
    Ok((values[model.initial_state], response))
}

/// Exact expected return of a policy pair by forward occupancy propagation.
pub fn policy_value(model: &FomgModel, pi: &MarkovPolicy, nu: &MarkovPolicy) -> Result<f64> {
    let (hn, sn, an, bn) = dims(model);
    check_policy_shapes(model, pi, nu)?;
    let mut dist = vec![0.0_f64; sn];
    dist[model.initial_state] = 1.0;
    let mut value = 0.0;
    let mut next = vec![0.0_f64; sn];
    for h in 0..hn {
        next.fill(0.0);
        for s in 0..sn {
            if dist[s] == 0.0 {
                continue;
            }
            let pr = pi.row(h, s);
            let nr = nu.row(h, s);
            for a in 0..an {
                for b in 0..bn {
                    let w = dist[s] * pr[a] * nr[b];
                    if w == 0.0 {
                        continue;
                    }
                    value += w * model.reward_at(h, s, a, b);
                    if h + 1 < hn {
                        let row = model.transition_row(h, s, a, b);
                        for (s2, &p) in row.iter().enumerate() {
                            next[s2] += w * p;
                        }
                    }
                }
            }
        }
        if h + 1 < hn {
            std::mem::swap(&mut dist, &mut next);
        }
    }
    Ok(value)
}

/// Exact distribution over `(s, a, b)` at step `h` (1-based) under the
/// policy pair, flattened s-major then a then b.
pub fn occupancy(
    model: &FomgModel,
    pi: &MarkovPolicy,
    nu: &MarkovPolicy,
    h: usize,
) -> Result<Vec<f64>> {
    let (hn, sn, an, bn) = dims(model);
    check_policy_shapes(model, pi, nu)?;
    if h == 0 || h > hn {
        return Err(CoreError::InvalidInput(format!(
            "step {h} out of range 1..={hn}"
        )));
    }
    let mut dist = vec![0.0_f64; sn];
    dist[model.initial_state] = 1.0;
    let mut next = vec![0.0_f64; sn];
    for step in 0..h - 1 {
        next.fill(0.0);
        for s in 0..sn {
            if dist[s] == 0.0 {
                continue;
            }
            let pr = pi.row(step, s);
            let nr = nu.row(step, s);
            for a in 0..an {
                for b in 0..bn {
                    let w = dist[s] * pr[a] * nr[b];
                    if w == 0.0 {
                        continue;
                    }
                    let row = model.transition_row(step, s, a, b);
                    for (s2, &p) in row.iter().enumerate() {
                        next[s2] += w * p;
                    }
                }
            }
        }
        std::mem::swap(&mut dist, &mut next);
    }
    let mut out = vec![0.0_f64; sn * an * bn];
    for s in 0..sn {
        let pr = pi.row(h - 1, s);
        let nr = nu.row(h - 1, s);
        for a in 0..an {
            for b in 0..bn {
                out[(s * an + a) * bn + b] = dist[s] * pr[a] * nr[b];
            }
        }
    }
    Ok(out)
}

/// Samples one episode under `(pi, nu)` in the given model.
pub fn sample_episode<R: Rng + ?Sized>(
    model: &FomgModel,
    pi: &MarkovPolicy,
    nu: &MarkovPolicy,
    rng: &mut R,
) -> FomgTrajectory {
    let hn = model.horizon;
    let mut steps = Vec::with_capacity(hn);
    let mut s = model.initial_state;
    for h in 0..hn {
        let a = sample_categorical(pi.row(h, s), rng);
        let b = sample_categorical(nu.row(h, s), rng);
        let reward = model.reward_at(h, s, a, b);
        let s_next = sample_categorical(model.transition_row(h, s, a, b), rng);
        steps.push(FomgStep {
            state: s,
            action_max: a,
            action_min: b,
            reward,
        });
        s = s_next;
    }
    FomgTrajectory {
        steps,
        final_state: s,
    }
}

/// Convenience: the equilibrium pair as a joint policy.
pub fn nash_joint_policy(plan: &FomgPlan) -> MarkovJointPolicy {
    MarkovJointPolicy {
        pi: plan.pi_star.clone(),
        nu: plan.nu_star.clone(),
    }
}

fn dims(model: &FomgModel) -> (usize, usize, usize, usize) {
    (
        model.horizon,
        model.num_states,
        model.num_actions_max,
        model.num_actions_min,
    )
}

fn check_policy_shapes(model: &FomgModel, pi: &MarkovPolicy, nu: &MarkovPolicy) -> Result<()> {
    if pi.horizon != model.horizon
        || pi.num_states != model.num_states
        || pi.num_actions != model.num_actions_max
    {
        return Err(CoreError::DimensionMismatch("max policy shape mismatch".into()));
    }
    if nu.horizon != model.horizon
        || nu.num_states != model.num_states
        || nu.num_actions != model.num_actions_min
    {
        return Err(CoreError::DimensionMismatch("min policy shape mismatch".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_game::Side;
    use crate::tol::STAGE_GAME_TOL;

    /// H=1, S=1 game with payoff [[1,0],[0,1]].
    fn pennies_like() -> FomgModel {
        FomgModel::new(1, 1, 2, 2, vec![1.0, 1.0, 1.0, 1.0], vec![1.0, 0.0, 0.0, 1.0], 0).unwrap()
    }

    #[test]
    fn single_step_symmetric_game_value_half() {
        let plan = nash_plan(&pennies_like(), STAGE_GAME_TOL).unwrap();
        assert!((plan.nash_value - 0.5).abs() <= 1e-9);
        assert!((plan.pi_star.row(0, 0)[0] - 0.5).abs() <= 1e-9);
        assert!((plan.nu_star.row(0, 0)[0] - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn h1_plan_agrees_with_matrix_game() {
        let m = pennies_like();
        let plan = nash_plan(&m, STAGE_GAME_TOL).unwrap();
        let sol = solve_matrix_game(2, 2, &m.reward, STAGE_GAME_TOL).unwrap();
        assert!((plan.nash_value - sol.value).abs() <= 1e-9);
    }

    #[test]
    fn deterministic_chain_policy_value() {
        // S=2, H=2, deterministic 0 -> 1, rewards 0.3 then 0.4.
        let m = FomgModel::new(
            2,
            2,
            1,
            1,
            vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
            vec![0.3, 0.7, 0.1, 0.4],
            0,
        )
        .unwrap();
        let pi = MarkovPolicy::uniform(2, 2, 1);
        let nu = MarkovPolicy::uniform(2, 2, 1);
        let v = policy_value(&m, &pi, &nu).unwrap();
        assert!((v - 0.7).abs() <= 1e-12);
    }

    #[test]
    fn zero_rewards_give_zero_value() {
        let m = FomgModel::new(1, 1, 2, 2, vec![1.0; 4], vec![0.0; 4], 0).unwrap();
        let pi = MarkovPolicy::uniform(1, 1, 2);
        let nu = MarkovPolicy::uniform(1, 1, 2);
        assert_eq!(policy_value(&m, &pi, &nu).unwrap(), 0.0);
    }

    #[test]
    fn occupancy_step_one_is_initial_point_mass() {
        let m = pennies_like();
        let pi = MarkovPolicy::uniform(1, 1, 2);
        let nu = MarkovPolicy::uniform(1, 1, 2);
        let occ = occupancy(&m, &pi, &nu, 1).unwrap();
        for &x in &occ {
            assert!((x - 0.25).abs() <= 1e-15);
        }
    }

    #[test]
    fn occupancy_uniform_rows_stay_uniform() {
        // Every transition row uniform: state marginal is uniform from h=2 on.
        let s = 3;
        let m = FomgModel::new(
            3,
            s,
            2,
            2,
            vec![1.0 / s as f64; 3 * s * 2 * 2 * s],
            vec![0.5; 3 * s * 2 * 2],
            1,
        )
        .unwrap();
        let pi = MarkovPolicy::uniform(3, s, 2);
        let nu = MarkovPolicy::uniform(3, s, 2);
        for h in 2..=3 {
            let occ = occupancy(&m, &pi, &nu, h).unwrap();
            for &x in &occ {
                assert!((x - 1.0 / (s * 2 * 2) as f64).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn occupancy_is_chapman_kolmogorov_consistent() {
        let m = FomgModel::new(
            2,
            2,
            2,
            1,
            vec![
                0.3, 0.7, 0.1, 0.9, 0.5, 0.5, 0.25, 0.75, 0.6, 0.4, 0.2, 0.8, 0.9, 0.1, 0.35, 0.65,
            ],
            vec![0.1; 8],
            0,
        )
        .unwrap();
        let pi = MarkovPolicy::uniform(2, 2, 2);
        let nu = MarkovPolicy::uniform(2, 2, 1);
        let occ1 = occupancy(&m, &pi, &nu, 1).unwrap();
        let occ2 = occupancy(&m, &pi, &nu, 2).unwrap();
        // Push occ1 through the kernel and compare state marginals at h=2.
        let mut marg = vec![0.0; 2];
        for s in 0..2 {
            for a in 0..2 {
                let w = occ1[(s * 2 + a) * 1];
                let row = m.transition_row(0, s, a, 0);
                for (s2, &p) in row.iter().enumerate() {
                    marg[s2] += w * p;
                }
            }
        }
        for s2 in 0..2 {
            let from_occ2: f64 = (0..2).map(|a| occ2[(s2 * 2 + a) * 1]).sum();
            assert!((from_occ2 - marg[s2]).abs() <= 1e-10);
        }
        let total: f64 = occ2.iter().sum();
        assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn best_response_to_nash_recovers_value() {
        let m = pennies_like();
        let plan = nash_plan(&m, STAGE_GAME_TOL).unwrap();
        let (v_max, _) = best_response(&m, &plan.nu_star, Side::Max).unwrap();
        let (v_min, _) = best_response(&m, &plan.pi_star, Side::Min).unwrap();
        assert!(v_max >= plan.nash_value - 2.0 * STAGE_GAME_TOL);
        assert!(v_max <= plan.nash_value + 2.0 * STAGE_GAME_TOL);
        assert!(v_min >= plan.nash_value - 2.0 * STAGE_GAME_TOL);
        assert!(v_min <= plan.nash_value + 2.0 * STAGE_GAME_TOL);
    }
}
