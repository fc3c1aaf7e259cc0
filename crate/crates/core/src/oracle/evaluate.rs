//! Exact Bellman evaluation of joint policies.
//!
//! The recursion carries an unnormalized belief (a sub-probability path
//! measure over non-terminal states), expanding only observation branches
//! with nonzero probability. The value of a history of length H is 0.

use crate::error::CoreError;
use crate::history::JointHistory;
use crate::model::DecPomdpModel;
use crate::oracle::belief::{belief_from_history, Belief};
use crate::oracle::tree::PolicyTree;

/// Exact `V^pi(h_0)` for a deterministic joint policy given as a fallible
/// lookup `jh -> joint action`.
pub fn evaluate_joint_policy_fn<F>(model: &DecPomdpModel, mut policy: F) -> Result<f64, CoreError>
where
    F: FnMut(&JointHistory) -> Result<Vec<usize>, CoreError>,
{
    let alive: Vec<f64> = model
        .initial_belief
        .iter()
        .enumerate()
        .map(|(s, &b)| if model.is_terminal(s) { 0.0 } else { b })
        .collect();
    value_rec(model, &alive, &JointHistory::empty(model.num_agents), &mut policy)
}

/// Exact `V^pi(h_0)` for an explicit policy tree.
pub fn evaluate_joint_policy(model: &DecPomdpModel, tree: &PolicyTree) -> Result<f64, CoreError> {
    evaluate_joint_policy_fn(model, |jh| tree.joint_action(jh))
}

/// `Q^pi(jh, ja)`: the value of taking `ja` at `jh` and following `pi`
/// afterwards. The history must be reachable (nonzero probability);
/// histories of length H have value 0.
pub fn evaluate_joint_q<F>(
    model: &DecPomdpModel,
    mut policy: F,
    jh: &JointHistory,
    joint_action: &[usize],
) -> Result<f64, CoreError>
where
    F: FnMut(&JointHistory) -> Result<Vec<usize>, CoreError>,
{
    if jh.len() >= model.horizon {
        return Ok(0.0);
    }
    let Belief(b) = belief_from_history(model, jh)?;
    let alive: Vec<f64> = b
        .iter()
        .enumerate()
        .map(|(s, &p)| if model.is_terminal(s) { 0.0 } else { p })
        .collect();
    q_rec(model, &alive, jh, joint_action, &mut policy)
}

/// Value of an unnormalized alive-state measure at joint history `jh`.
fn value_rec<F>(
    model: &DecPomdpModel,
    alive: &[f64],
    jh: &JointHistory,
    policy: &mut F,
) -> Result<f64, CoreError>
where
    F: FnMut(&JointHistory) -> Result<Vec<usize>, CoreError>,
{
    if jh.len() >= model.horizon || alive.iter().all(|&p| p == 0.0) {
        return Ok(0.0);
    }
    let ja = policy(jh)?;
    q_rec(model, alive, jh, &ja, policy)
}

fn q_rec<F>(
    model: &DecPomdpModel,
    alive: &[f64],
    jh: &JointHistory,
    joint_action: &[usize],
    policy: &mut F,
) -> Result<f64, CoreError>
where
    F: FnMut(&JointHistory) -> Result<Vec<usize>, CoreError>,
{
    let ja_idx = model.joint_action_index(joint_action);
    let mut value = model.expected_reward(alive, ja_idx);

    if jh.len() + 1 < model.horizon && model.discount > 0.0 {
        // predicted next-state measure before conditioning on the observation
        let mut pred = vec![0.0; model.num_states];
        for (s, &mass) in alive.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for (s_next, &t) in model.transition[s][ja_idx].iter().enumerate() {
                pred[s_next] += mass * t;
            }
        }
        for jo_idx in 0..model.num_joint_obs() {
            let mut next_alive = vec![0.0; model.num_states];
            let mut mass = 0.0;
            for (s_next, &p) in pred.iter().enumerate() {
                let o = model.observation[ja_idx][s_next][jo_idx];
                let m = p * o;
                if m > 0.0 {
                    mass += m;
                    if !model.is_terminal(s_next) {
                        next_alive[s_next] = m;
                    }
                }
            }
            if mass == 0.0 {
                continue;
            }
            let jo = model.joint_obs_from_index(jo_idx);
            let jh_next = jh.appended(joint_action, &jo);
            value += model.discount * value_rec(model, &next_alive, &jh_next, policy)?;
        }
    }
    Ok(value)
}
