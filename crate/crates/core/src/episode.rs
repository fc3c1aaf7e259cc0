//! Episodes and rollouts.

use crate::error::CoreError;
use crate::history::JointHistory;
use crate::model::DecPomdpModel;
use crate::policy::DeterministicJointPolicy;
use crate::rng::Rng;

/// One timestep of a rollout: the joint action taken, the shared reward, and
/// the joint observation received.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub joint_action: Vec<usize>,
    pub reward: f64,
    pub joint_obs: Vec<usize>,
}

/// A recorded trajectory. `states` holds the hidden state at each step for
/// diagnostics only; learners never read it unless the model is fully
/// observable by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub steps: Vec<Step>,
    pub states: Vec<usize>,
    pub seed: u64,
}

impl Episode {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Undiscounted episode return.
    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    /// Agent i's local view: (action, observation) pairs.
    pub fn local_view(&self, agent: usize) -> Vec<(usize, usize)> {
        self.steps
            .iter()
            .map(|s| (s.joint_action[agent], s.joint_obs[agent]))
            .collect()
    }
}

/// Discounted return from timestep `t`: `G_t = sum_{k=t}^{T-1} gamma^{k-t} r_k`.
pub fn discounted_return(episode: &Episode, t: usize, gamma: f64) -> Result<f64, CoreError> {
    if t >= episode.len() {
        return Err(CoreError::IndexOutOfRange {
            what: "timestep",
            index: t,
            size: episode.len(),
        });
    }
    let mut g = 0.0;
    for k in (t..episode.len()).rev() {
        g = episode.steps[k].reward + gamma * g;
    }
    Ok(g)
}

/// Roll out a deterministic joint policy for up to `horizon` steps, stopping
/// early at terminal states. Identical (model, policy, rng state) produce
/// bit-identical episodes.
pub fn rollout(
    model: &DecPomdpModel,
    policy: &impl DeterministicJointPolicy,
    rng: &mut Rng,
    seed: u64,
) -> Result<Episode, CoreError> {
    rollout_with(model, |jh, _| Ok(policy.act_joint(jh)), rng, seed)
}

/// Rollout driven by an arbitrary action-selection closure (used by learners
/// for exploration). The closure sees the joint history and the RNG.
pub fn rollout_with<F>(
    model: &DecPomdpModel,
    mut select: F,
    rng: &mut Rng,
    seed: u64,
) -> Result<Episode, CoreError>
where
    F: FnMut(&JointHistory, &mut Rng) -> Result<Vec<usize>, CoreError>,
{
    let mut state = model.sample_initial_state(rng);
    let mut jh = JointHistory::empty(model.num_agents);
    let mut steps = Vec::with_capacity(model.horizon);
    let mut states = vec![state];
    for _ in 0..model.horizon {
        if model.is_terminal(state) {
            break;
        }
        let joint_action = select(&jh, rng)?;
        for (i, &a) in joint_action.iter().enumerate() {
            if a >= model.actions_per_agent[i] {
                return Err(CoreError::IndexOutOfRange {
                    what: "action",
                    index: a,
                    size: model.actions_per_agent[i],
                });
            }
        }
        let ja_idx = model.joint_action_index(&joint_action);
        let (reward, jo_idx, s_next) = model.sample_step(state, ja_idx, rng);
        let joint_obs = model.joint_obs_from_index(jo_idx);
        jh = jh.appended(&joint_action, &joint_obs);
        steps.push(Step {
            joint_action,
            reward,
            joint_obs,
        });
        state = s_next;
        states.push(state);
    }
    Ok(Episode { steps, states, seed })
}
