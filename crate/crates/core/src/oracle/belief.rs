//! Belief tracking: the state distribution conditioned on a joint history.

use crate::error::CoreError;
use crate::history::JointHistory;
use crate::model::DecPomdpModel;
use crate::PROB_TOL;

/// A probability vector over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief(pub Vec<f64>);

impl Belief {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.0.iter().any(|&p| p < 0.0) {
            return Err(CoreError::BadParameter("negative belief entry".into()));
        }
        let sum: f64 = self.0.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(CoreError::NotAProbability { what: "belief", sum });
        }
        Ok(())
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// Bayes filter step: `b'(s') ∝ O(ja, s', jo) * sum_s T(s, ja, s') b(s)`.
/// A zero normalizer means the observation is impossible at this belief,
/// i.e. the history is inconsistent with the model.
pub fn belief_update(
    model: &DecPomdpModel,
    b: &Belief,
    joint_action: usize,
    joint_obs: usize,
) -> Result<Belief, CoreError> {
    let mut next = vec![0.0; model.num_states];
    for (s_next, slot) in next.iter_mut().enumerate() {
        let o = model.observation[joint_action][s_next][joint_obs];
        if o == 0.0 {
            continue;
        }
        let pred: f64 = b
            .0
            .iter()
            .enumerate()
            .map(|(s, &bs)| bs * model.transition[s][joint_action][s_next])
            .sum();
        *slot = o * pred;
    }
    let norm: f64 = next.iter().sum();
    if norm <= 0.0 {
        return Err(CoreError::InconsistentHistory);
    }
    for p in &mut next {
        *p /= norm;
    }
    Ok(Belief(next))
}

/// Filter the initial belief through a joint history.
pub fn belief_from_history(model: &DecPomdpModel, jh: &JointHistory) -> Result<Belief, CoreError> {
    let mut b = Belief(model.initial_belief.clone());
    for t in 0..jh.len() {
        let ja: Vec<usize> = (0..model.num_agents)
            .map(|i| jh.agent(i).entries()[t].0)
            .collect();
        let jo: Vec<usize> = (0..model.num_agents)
            .map(|i| jh.agent(i).entries()[t].1)
            .collect();
        b = belief_update(model, &b, model.joint_action_index(&ja), model.joint_obs_index(&jo))?;
    }
    Ok(b)
}
