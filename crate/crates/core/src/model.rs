//! Explicit-table Dec-POMDP model with a generative sampling interface.

use crate::error::CoreError;
use crate::history::LocalHistory;
use crate::rng::sample_categorical;
use crate::PROB_TOL;
use rand_chacha::rand_core::RngCore;

/// A finite Dec-POMDP: states, per-agent actions and observations, transition,
/// reward and observation tables, an initial belief, a horizon, and a
/// discount.
///
/// Joint actions and joint observations are indexed row-major by agent order
/// (agent 0 most significant). All probability tables are explicit; the
/// generative interface samples from them.
#[derive(Debug, Clone)]
pub struct DecPomdpModel {
    pub name: String,
    pub num_agents: usize,
    pub num_states: usize,
    pub actions_per_agent: Vec<usize>,
    pub obs_per_agent: Vec<usize>,
    pub initial_belief: Vec<f64>,
    pub horizon: usize,
    pub discount: f64,
    /// `transition[s][ja]` is a probability vector over next states.
    pub transition: Vec<Vec<Vec<f64>>>,
    /// `reward[s][ja]` is the shared immediate reward.
    pub reward: Vec<Vec<f64>>,
    /// `observation[ja][s_next]` is a probability vector over joint observations.
    pub observation: Vec<Vec<Vec<f64>>>,
    /// States at which an episode ends early (all `false` when purely
    /// finite-horizon).
    pub terminal_states: Vec<bool>,
}

impl DecPomdpModel {
    pub fn num_joint_actions(&self) -> usize {
        self.actions_per_agent.iter().product()
    }

    pub fn num_joint_obs(&self) -> usize {
        self.obs_per_agent.iter().product()
    }

    /// Row-major joint action index (agent 0 most significant).
    pub fn joint_action_index(&self, actions: &[usize]) -> usize {
        debug_assert_eq!(actions.len(), self.num_agents);
        let mut idx = 0;
        for (i, &a) in actions.iter().enumerate() {
            idx = idx * self.actions_per_agent[i] + a;
        }
        idx
    }

    pub fn joint_action_from_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.num_agents];
        for i in (0..self.num_agents).rev() {
            out[i] = idx % self.actions_per_agent[i];
            idx /= self.actions_per_agent[i];
        }
        out
    }

    pub fn joint_obs_index(&self, obs: &[usize]) -> usize {
        debug_assert_eq!(obs.len(), self.num_agents);
        let mut idx = 0;
        for (i, &o) in obs.iter().enumerate() {
            idx = idx * self.obs_per_agent[i] + o;
        }
        idx
    }

    pub fn joint_obs_from_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.num_agents];
        for i in (0..self.num_agents).rev() {
            out[i] = idx % self.obs_per_agent[i];
            idx /= self.obs_per_agent[i];
        }
        out
    }

    /// Iterate all joint actions in index order.
    pub fn joint_actions(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.num_joint_actions()).map(|i| self.joint_action_from_index(i))
    }

    /// Check every structural invariant: table shapes, probability vectors
    /// summing to 1 within 1e-12, and parameter ranges.
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(0.0..=1.0).contains(&self.discount) {
            return Err(CoreError::BadParameter(format!(
                "discount {} outside [0, 1]",
                self.discount
            )));
        }
        if self.horizon == 0 {
            return Err(CoreError::BadParameter("horizon must be positive".into()));
        }
        check_prob_vector(&self.initial_belief, "initial belief", self.num_states)?;
        let nja = self.num_joint_actions();
        let njo = self.num_joint_obs();
        if self.transition.len() != self.num_states || self.reward.len() != self.num_states {
            return Err(CoreError::BadParameter("table sized by states".into()));
        }
        for s in 0..self.num_states {
            for ja in 0..nja {
                check_prob_vector(&self.transition[s][ja], "transition row", self.num_states)?;
            }
        }
        if self.observation.len() != nja {
            return Err(CoreError::BadParameter("observation table sized by joint actions".into()));
        }
        for ja in 0..nja {
            for s_next in 0..self.num_states {
                check_prob_vector(&self.observation[ja][s_next], "observation row", njo)?;
            }
        }
        if self.terminal_states.len() != self.num_states {
            return Err(CoreError::BadParameter("terminal flags sized by states".into()));
        }
        Ok(())
    }

    /// Validating, horizon-aware history extension.
    pub fn append_history(
        &self,
        agent: usize,
        h: &LocalHistory,
        action: usize,
        obs: usize,
    ) -> Result<LocalHistory, CoreError> {
        if action >= self.actions_per_agent[agent] {
            return Err(CoreError::IndexOutOfRange {
                what: "action",
                index: action,
                size: self.actions_per_agent[agent],
            });
        }
        if obs >= self.obs_per_agent[agent] {
            return Err(CoreError::IndexOutOfRange {
                what: "observation",
                index: obs,
                size: self.obs_per_agent[agent],
            });
        }
        if h.len() >= self.horizon {
            return Err(CoreError::HorizonExceeded {
                len: h.len(),
                horizon: self.horizon,
            });
        }
        Ok(h.appended(action, obs))
    }

    // --- generative interface ---

    pub fn sample_initial_state(&self, rng: &mut impl RngCore) -> usize {
        sample_categorical(&self.initial_belief, rng)
    }

    /// One generative step: `(reward, joint observation index, next state)`.
    /// Draw order is fixed: next state first, then the joint observation.
    pub fn sample_step(
        &self,
        state: usize,
        joint_action: usize,
        rng: &mut impl RngCore,
    ) -> (f64, usize, usize) {
        let r = self.reward[state][joint_action];
        let s_next = sample_categorical(&self.transition[state][joint_action], rng);
        let jo = sample_categorical(&self.observation[joint_action][s_next], rng);
        (r, jo, s_next)
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal_states[state]
    }

    /// Expected immediate reward under a belief.
    pub fn expected_reward(&self, belief: &[f64], joint_action: usize) -> f64 {
        belief
            .iter()
            .enumerate()
            .map(|(s, b)| b * self.reward[s][joint_action])
            .sum()
    }

    /// True when every agent observes the full state deterministically
    /// (observation sets = states, identity observation function).
    pub fn is_fully_observable(&self) -> bool {
        if self.obs_per_agent.iter().any(|&o| o != self.num_states) {
            return false;
        }
        let identity = |s_next: usize| {
            let jo = self.joint_obs_index(&vec![s_next; self.num_agents]);
            move |row: &[f64]| {
                row.iter()
                    .enumerate()
                    .all(|(i, &p)| if i == jo { (p - 1.0).abs() < PROB_TOL } else { p.abs() < PROB_TOL })
            }
        };
        for ja in 0..self.num_joint_actions() {
            for s_next in 0..self.num_states {
                if !identity(s_next)(&self.observation[ja][s_next]) {
                    return false;
                }
            }
        }
        true
    }
}

fn check_prob_vector(p: &[f64], what: &'static str, expect_len: usize) -> Result<(), CoreError> {
    if p.len() != expect_len {
        return Err(CoreError::BadParameter(format!(
            "{what} has length {}, expected {expect_len}",
            p.len()
        )));
    }
    if p.iter().any(|&x| x < 0.0) {
        return Err(CoreError::BadParameter(format!("{what} has negative entry")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(CoreError::NotAProbability { what, sum });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::make_dec_tiger;

    #[test]
    fn joint_indexing_round_trips() {
        let m = make_dec_tiger(3, 0.85).unwrap();
        for idx in 0..m.num_joint_actions() {
            assert_eq!(m.joint_action_index(&m.joint_action_from_index(idx)), idx);
        }
        for idx in 0..m.num_joint_obs() {
            assert_eq!(m.joint_obs_index(&m.joint_obs_from_index(idx)), idx);
        }
    }

    #[test]
    fn append_history_checks_bounds_and_horizon() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        let h = LocalHistory::empty();
        let h1 = m.append_history(0, &h, 1, 0).unwrap();
        assert_eq!(h1.entries(), &[(1, 0)]);
        assert!(matches!(
            m.append_history(0, &h, 3, 0),
            Err(CoreError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            m.append_history(0, &h, 0, 2),
            Err(CoreError::IndexOutOfRange { .. })
        ));
        let h2 = m.append_history(0, &h1, 0, 0).unwrap();
        assert!(matches!(
            m.append_history(0, &h2, 0, 0),
            Err(CoreError::HorizonExceeded { .. })
        ));
    }
}
