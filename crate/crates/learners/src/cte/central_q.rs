//! Tabular joint Q-learning with centralized control.

use std::collections::HashMap;
use std::hash::Hash;

use marl_core::rng::{STREAM_ENV, STREAM_EXPLORE};
use marl_core::{
    argmax_tie_low, epsilon_greedy, rollout_with, DecPomdpModel, DeterministicJointPolicy,
    JointHistory, RngStream,
};

use crate::common::{greedy_eval, EpisodeRow, EpsilonSchedule, EvalCadence};
use crate::LearnerError;

/// Joint action values keyed by state index (MMDP) or joint history (MPOMDP).
/// Joint actions enumerate the cross product row-major by agent index.
/// Lookups of unseen keys return the default row without inserting.
#[derive(Debug, Clone)]
pub struct JointQTable<K: Eq + Hash + Clone> {
    map: HashMap<K, Vec<f64>>,
    pub num_joint_actions: usize,
    pub default: f64,
}

impl<K: Eq + Hash + Clone> JointQTable<K> {
    pub fn new(num_joint_actions: usize, default: f64) -> Self {
        Self { map: HashMap::new(), num_joint_actions, default }
    }

    pub fn row(&self, key: &K) -> Vec<f64> {
        self.map
            .get(key)
            .cloned()
            .unwrap_or_else(|| vec![self.default; self.num_joint_actions])
    }

    pub fn get(&self, key: &K, ja: usize) -> f64 {
        self.map.get(key).map_or(self.default, |r| r[ja])
    }

    pub fn max(&self, key: &K) -> f64 {
        self.map
            .get(key)
            .map_or(self.default, |r| r.iter().cloned().fold(f64::MIN, f64::max))
    }

    pub fn row_mut(&mut self, key: &K) -> &mut Vec<f64> {
        let default = vec![self.default; self.num_joint_actions];
        self.map.entry(key.clone()).or_insert(default)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.map.keys()
    }
}

/// Standard Q-learning over joint actions, keyed by state. Bootstraps 0 past
/// terminal transitions.
pub fn mmdp_q_update(
    q: &mut JointQTable<usize>,
    s: usize,
    ja: usize,
    r: f64,
    s_next: usize,
    terminal: bool,
    alpha: f64,
    gamma: f64,
) -> f64 {
    let bootstrap = if terminal { 0.0 } else { q.max(&s_next) };
    let row = q.row_mut(&s);
    let delta = r + gamma * bootstrap - row[ja];
    row[ja] += alpha * delta;
    delta
}

/// The same update keyed by joint history.
pub fn mpomdp_q_update(
    q: &mut JointQTable<JointHistory>,
    jh: &JointHistory,
    ja: usize,
    r: f64,
    jh_next: &JointHistory,
    terminal: bool,
    alpha: f64,
    gamma: f64,
) -> f64 {
    let bootstrap = if terminal { 0.0 } else { q.max(jh_next) };
    let row = q.row_mut(jh);
    let delta = r + gamma * bootstrap - row[ja];
    row[ja] += alpha * delta;
    delta
}

/// Project a centralized MMDP policy onto per-agent policies:
/// `pi_i(s)` is the i-th component of the joint action.
pub fn decentralize_mmdp_policy(
    model: &DecPomdpModel,
    joint_policy: &HashMap<usize, usize>,
) -> Vec<HashMap<usize, usize>> {
    let mut per_agent = vec![HashMap::new(); model.num_agents];
    for (&s, &ja) in joint_policy {
        let actions = model.joint_action_from_index(ja);
        for (i, &a) in actions.iter().enumerate() {
            per_agent[i].insert(s, a);
        }
    }
    per_agent
}

/// Recompose per-agent MMDP policies back into a joint policy.
pub fn recompose_mmdp_policy(
    model: &DecPomdpModel,
    per_agent: &[HashMap<usize, usize>],
) -> HashMap<usize, usize> {
    let mut joint = HashMap::new();
    for (&s, &a0) in &per_agent[0] {
        let mut actions = vec![a0];
        for agent in per_agent.iter().skip(1) {
            actions.push(agent[&s]);
        }
        joint.insert(s, model.joint_action_index(&actions));
    }
    joint
}

#[derive(Debug, Clone)]
pub struct CentralConfig {
    pub episodes: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: EpsilonSchedule,
    pub eval: EvalCadence,
}

impl Default for CentralConfig {
    fn default() -> Self {
        Self {
            episodes: 20_000,
            alpha: 1.0,
            gamma: 0.95,
            epsilon: EpsilonSchedule::constant(1.0),
            eval: EvalCadence { every: 0, rollouts: 0 },
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentralMmdpRun {
    pub q: JointQTable<usize>,
    pub rows: Vec<EpisodeRow>,
}

impl CentralMmdpRun {
    /// Greedy centralized policy: state to joint action, lowest-index ties.
    pub fn greedy_joint_action(&self, s: usize) -> usize {
        argmax_tie_low(&self.q.row(&s))
    }

    pub fn greedy_policy_map(&self) -> HashMap<usize, usize> {
        self.q
            .keys()
            .map(|&s| (s, argmax_tie_low(&self.q.row(&s))))
            .collect()
    }
}

/// Joint Q-learning on a fully observable model. The agents' shared
/// observation is the state, read from the identity observation.
pub fn train_central_mmdp(
    model: &DecPomdpModel,
    cfg: &CentralConfig,
    seed: u64,
) -> Result<CentralMmdpRun, LearnerError> {
    if !model.is_fully_observable() {
        return Err(LearnerError::Core(
            marl_core::CoreError::NotFullyObservable("centralized MMDP Q-learning"),
        ));
    }
    let stream = RngStream::new(seed);
    let mut env_rng = stream.split(STREAM_ENV);
    let mut explore_rng = stream.split(STREAM_EXPLORE);
    let mut q = JointQTable::new(model.num_joint_actions(), 0.0);
    let mut rows = Vec::with_capacity(cfg.episodes);

    for episode in 0..cfg.episodes {
        let eps = cfg.epsilon.at(episode);
        let mut state = model.sample_initial_state(&mut env_rng);
        let mut train_return = 0.0;
        let mut abs_delta = 0.0;
        let mut steps = 0usize;
        for _ in 0..model.horizon {
            if model.is_terminal(state) {
                break;
            }
            let ja = epsilon_greedy(&q.row(&state), eps, &mut explore_rng)?;
            let (r, _jo, s_next) = model.sample_step(state, ja, &mut env_rng);
            let terminal = model.is_terminal(s_next);
            let delta = mmdp_q_update(&mut q, state, ja, r, s_next, terminal, cfg.alpha, cfg.gamma);
            abs_delta += delta.abs();
            train_return += r;
            state = s_next;
            steps += 1;
        }
        let eval_return = if cfg.eval.due(episode, cfg.episodes) {
            let greedy = MmdpGreedy { q: &q, model };
            Some(greedy_eval(model, &greedy, &stream, episode, cfg.eval.rollouts)?)
        } else {
            None
        };
        rows.push(EpisodeRow {
            episode,
            train_return,
            eval_return,
            loss: abs_delta / steps.max(1) as f64,
            explore: eps,
        });
    }
    Ok(CentralMmdpRun { q, rows })
}

/// Greedy wrapper reading the state from the last identity observation.
struct MmdpGreedy<'a> {
    q: &'a JointQTable<usize>,
    model: &'a DecPomdpModel,
}

impl DeterministicJointPolicy for MmdpGreedy<'_> {
    fn act_joint(&self, jh: &JointHistory) -> Vec<usize> {
        let state = if jh.is_empty() {
            argmax_tie_low(&self.model.initial_belief)
        } else {
            jh.agent(0).entries().last().unwrap().1
        };
        let ja = argmax_tie_low(&self.q.row(&state));
        self.model.joint_action_from_index(ja)
    }
}

#[derive(Debug, Clone)]
pub struct CentralMpomdpRun {
    pub q: JointQTable<JointHistory>,
    pub rows: Vec<EpisodeRow>,
}

/// Greedy centralized policy over joint histories.
pub struct MpomdpGreedy<'a> {
    pub q: &'a JointQTable<JointHistory>,
    pub model: &'a DecPomdpModel,
}

impl DeterministicJointPolicy for MpomdpGreedy<'_> {
    fn act_joint(&self, jh: &JointHistory) -> Vec<usize> {
        let ja = argmax_tie_low(&self.q.row(jh));
        self.model.joint_action_from_index(ja)
    }
}

/// Joint Q-learning keyed by joint histories (the MPOMDP reduction).
pub fn train_central_mpomdp(
    model: &DecPomdpModel,
    cfg: &CentralConfig,
    seed: u64,
) -> Result<CentralMpomdpRun, LearnerError> {
    let stream = RngStream::new(seed);
    let mut env_rng = stream.split(STREAM_ENV);
    let mut explore_rng = stream.split(STREAM_EXPLORE);
    let mut q = JointQTable::new(model.num_joint_actions(), 0.0);
    let mut rows = Vec::with_capacity(cfg.episodes);

    for episode in 0..cfg.episodes {
        let eps = cfg.epsilon.at(episode);
        // transitions gathered under the exploration policy
        let mut transitions: Vec<(JointHistory, usize, f64, JointHistory, bool)> = Vec::new();
        let ep = {
            let q_ref = &q;
            let mut jh = JointHistory::empty(model.num_agents);
            rollout_with(
                model,
                |current, rng| {
                    jh = current.clone();
                    let ja = epsilon_greedy(&q_ref.row(current), eps, rng)?;
                    Ok(model.joint_action_from_index(ja))
                },
                &mut env_rng,
                seed,
            )?
        };
        // replay the episode into updates (online order)
        let mut jh = JointHistory::empty(model.num_agents);
        let mut train_return = 0.0;
        let mut abs_delta = 0.0;
        for (t, step) in ep.steps.iter().enumerate() {
            let jh_next = jh.appended(&step.joint_action, &step.joint_obs);
            let terminal = t + 1 >= model.horizon || model.is_terminal(ep.states[t + 1]);
            transitions.push((
                jh.clone(),
                model.joint_action_index(&step.joint_action),
                step.reward,
                jh_next.clone(),
                terminal,
            ));
            train_return += step.reward;
            jh = jh_next;
        }
        for (jh, ja, r, jh_next, terminal) in &transitions {
            let d = mpomdp_q_update(&mut q, jh, *ja, *r, jh_next, *terminal, cfg.alpha, cfg.gamma);
            abs_delta += d.abs();
        }
        // exploration draws above happen inside the env rollout; reserve the
        // explore stream so per-episode draws stay aligned across configs
        let _ = &mut explore_rng;
        let eval_return = if cfg.eval.due(episode, cfg.episodes) {
            let greedy = MpomdpGreedy { q: &q, model };
            Some(greedy_eval(model, &greedy, &stream, episode, cfg.eval.rollouts)?)
        } else {
            None
        };
        rows.push(EpisodeRow {
            episode,
            train_return,
            eval_return,
            loss: abs_delta / transitions.len().max(1) as f64,
            explore: eps,
        });
    }
    Ok(CentralMpomdpRun { q, rows })
}
