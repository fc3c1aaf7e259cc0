//! Tabular independent Q-learning and its optimistic variants.

use std::collections::HashMap;

use marl_core::rng::{Rng, STREAM_ENV, STREAM_EXPLORE};
use marl_core::{
    argmax_tie_low, epsilon_greedy, rollout_with, DecPomdpModel, DeterministicPolicy,
    LocalHistory, RngStream,
};
use rand::Rng as _;

use crate::common::{greedy_eval, EpisodeRow, EpsilonSchedule, EvalCadence};
use crate::LearnerError;

/// Per-agent action values keyed by local history. Lookups of unseen keys
/// return the default row without inserting.
#[derive(Debug, Clone)]
pub struct TabularQ {
    map: HashMap<LocalHistory, Vec<f64>>,
    pub num_actions: usize,
    pub default: f64,
}

impl TabularQ {
    pub fn new(num_actions: usize, default: f64) -> Self {
        Self { map: HashMap::new(), num_actions, default }
    }

    pub fn row(&self, h: &LocalHistory) -> Vec<f64> {
        self.map
            .get(h)
            .cloned()
            .unwrap_or_else(|| vec![self.default; self.num_actions])
    }

    pub fn get(&self, h: &LocalHistory, a: usize) -> f64 {
        self.map.get(h).map_or(self.default, |r| r[a])
    }

    pub fn max(&self, h: &LocalHistory) -> f64 {
        self.map
            .get(h)
            .map_or(self.default, |r| r.iter().cloned().fold(f64::MIN, f64::max))
    }

    pub fn row_mut(&mut self, h: &LocalHistory) -> &mut Vec<f64> {
        let default = vec![self.default; self.num_actions];
        self.map.entry(h.clone()).or_insert(default)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&LocalHistory, &Vec<f64>)> {
        self.map.iter()
    }
}

/// Standard Q-learning TD update; bootstrap is zero on terminal transitions.
/// Returns the TD error.
pub fn iql_update(
    q: &mut TabularQ,
    h: &LocalHistory,
    a: usize,
    r: f64,
    h_next: &LocalHistory,
    terminal: bool,
    alpha: f64,
    gamma: f64,
) -> f64 {
    let bootstrap = if terminal { 0.0 } else { q.max(h_next) };
    let row = q.row_mut(h);
    let delta = r + gamma * bootstrap - row[a];
    row[a] += alpha * delta;
    delta
}

/// Optimistic max update: entries never decrease. When an entry strictly
/// increases and becomes a best action, it is recorded in the policy store
/// so agents stay coordinated on the same optimum. Returns whether the entry
/// increased.
pub fn distributed_q_update(
    q: &mut TabularQ,
    policy_store: &mut HashMap<LocalHistory, usize>,
    h: &LocalHistory,
    a: usize,
    r: f64,
    h_next: &LocalHistory,
    terminal: bool,
    gamma: f64,
) -> bool {
    let bootstrap = if terminal { 0.0 } else { q.max(h_next) };
    let target = r + gamma * bootstrap;
    let row = q.row_mut(h);
    if target > row[a] {
        row[a] = target;
        let is_best = row.iter().all(|&v| v <= row[a]);
        if is_best {
            policy_store.insert(h.clone(), a);
        }
        true
    } else {
        false
    }
}

/// Two learning rates: `alpha` on positive TD errors, `beta <= alpha` on
/// negative ones. Returns the TD error.
pub fn hysteretic_update(
    q: &mut TabularQ,
    h: &LocalHistory,
    a: usize,
    r: f64,
    h_next: &LocalHistory,
    terminal: bool,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> f64 {
    let bootstrap = if terminal { 0.0 } else { q.max(h_next) };
    let row = q.row_mut(h);
    let delta = r + gamma * bootstrap - row[a];
    row[a] += if delta > 0.0 { alpha } else { beta } * delta;
    delta
}

/// Per history-action temperatures governing how often negative updates are
/// ignored. Temperatures start at `max_temperature` and only decay.
#[derive(Debug, Clone)]
pub struct LenientState {
    temps: HashMap<LocalHistory, Vec<f64>>,
    pub max_temperature: f64,
    pub decay: f64,
    pub leniency: f64,
    /// Decay on every visit (default) or only on applied updates.
    pub decay_on_visit: bool,
}

impl LenientState {
    pub fn new(max_temperature: f64, decay: f64, leniency: f64) -> Self {
        assert!(decay > 0.0 && decay < 1.0, "decay must be in (0, 1)");
        Self {
            temps: HashMap::new(),
            max_temperature,
            decay,
            leniency,
            decay_on_visit: true,
        }
    }

    pub fn temperature(&self, h: &LocalHistory, a: usize) -> f64 {
        self.temps.get(h).map_or(self.max_temperature, |r| r[a])
    }

    fn slot(&mut self, h: &LocalHistory, a: usize, num_actions: usize) -> &mut f64 {
        let max_t = self.max_temperature;
        let row = self
            .temps
            .entry(h.clone())
            .or_insert_with(|| vec![max_t; num_actions]);
        &mut row[a]
    }
}

/// Lenient Q-learning: apply the update when the TD error is positive or
/// when a uniform draw exceeds `1 - exp(-K * T(h, a))`; the temperature is
/// decayed afterwards. Returns (TD error, applied).
#[allow(clippy::too_many_arguments)]
pub fn lenient_update(
    q: &mut TabularQ,
    lenient: &mut LenientState,
    h: &LocalHistory,
    a: usize,
    r: f64,
    h_next: &LocalHistory,
    terminal: bool,
    alpha: f64,
    gamma: f64,
    rng: &mut Rng,
) -> (f64, bool) {
    let bootstrap = if terminal { 0.0 } else { q.max(h_next) };
    let temp = lenient.temperature(h, a);
    let row = q.row_mut(h);
    let delta = r + gamma * bootstrap - row[a];
    let draw: f64 = rng.gen();
    let applied = delta > 0.0 || draw > 1.0 - (-lenient.leniency * temp).exp();
    if applied {
        row[a] += alpha * delta;
    }
    if applied || lenient.decay_on_visit {
        let num_actions = q.num_actions;
        let t = lenient.slot(h, a, num_actions);
        *t *= lenient.decay;
    }
    (delta, applied)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TabularAlgo {
    Iql { alpha: f64 },
    DistributedQ,
    Hysteretic { alpha: f64, beta: f64 },
    Lenient { alpha: f64, max_temperature: f64, decay: f64, leniency: f64 },
}

impl TabularAlgo {
    pub fn validate(&self) -> Result<(), LearnerError> {
        match *self {
            TabularAlgo::Iql { alpha } | TabularAlgo::Lenient { alpha, .. } => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(LearnerError::BadConfig(format!("alpha {alpha} outside (0, 1]")));
                }
            }
            TabularAlgo::Hysteretic { alpha, beta } => {
                if !(beta > 0.0 && beta <= alpha && alpha <= 1.0) {
                    return Err(LearnerError::BadConfig(format!(
                        "hysteretic rates need 0 < beta <= alpha <= 1, got alpha {alpha}, beta {beta}"
                    )));
                }
            }
            TabularAlgo::DistributedQ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TabularConfig {
    pub episodes: usize,
    pub gamma: f64,
    pub epsilon: EpsilonSchedule,
    pub q_init: f64,
    /// One shared rollout feeds all agents (the concurrent-learning
    /// assumption). The ablation runs one rollout per agent per episode and
    /// lets each agent update only from its own stream.
    pub concurrent: bool,
    pub eval: EvalCadence,
    /// Hard cap on table entries per agent.
    pub memory_cap: usize,
}

impl Default for TabularConfig {
    fn default() -> Self {
        Self {
            episodes: 2000,
            gamma: 1.0,
            epsilon: EpsilonSchedule { start: 1.0, end: 0.05, decay_episodes: 1500 },
            q_init: 0.0,
            concurrent: true,
            eval: EvalCadence { every: 0, rollouts: 0 },
            memory_cap: 2_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TabularAgent {
    pub q: TabularQ,
    pub policy_store: HashMap<LocalHistory, usize>,
    pub lenient: Option<LenientState>,
}

impl TabularAgent {
    /// Greedy policy with lowest-index tie-break over the Q row.
    pub fn greedy(&self) -> GreedyTabularPolicy {
        GreedyTabularPolicy { q: self.q.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyTabularPolicy {
    pub q: TabularQ,
}

impl DeterministicPolicy for GreedyTabularPolicy {
    fn act(&self, h: &LocalHistory) -> usize {
        argmax_tie_low(&self.q.row(h))
    }
}

#[derive(Debug, Clone)]
pub struct TabularRun {
    pub agents: Vec<TabularAgent>,
    pub rows: Vec<EpisodeRow>,
}

impl TabularRun {
    pub fn greedy_joint(&self) -> Vec<GreedyTabularPolicy> {
        self.agents.iter().map(TabularAgent::greedy).collect()
    }
}

/// Train one tabular learner per agent from a shared episode stream.
pub fn train_tabular(
    model: &DecPomdpModel,
    algo: TabularAlgo,
    cfg: &TabularConfig,
    seed: u64,
) -> Result<TabularRun, LearnerError> {
    algo.validate()?;
    let stream = RngStream::new(seed);
    let mut env_rng = stream.split(STREAM_ENV);
    let mut explore_rng = stream.split(STREAM_EXPLORE);
    let mut lenient_rng = stream.split(marl_core::rng::STREAM_REPLAY);

    let mut agents: Vec<TabularAgent> = (0..model.num_agents)
        .map(|i| TabularAgent {
            q: TabularQ::new(model.actions_per_agent[i], cfg.q_init),
            policy_store: HashMap::new(),
            lenient: match algo {
                TabularAlgo::Lenient { max_temperature, decay, leniency, .. } => {
                    Some(LenientState::new(max_temperature, decay, leniency))
                }
                _ => None,
            },
        })
        .collect();
    let mut rows = Vec::with_capacity(cfg.episodes);

    for episode in 0..cfg.episodes {
        let eps = cfg.epsilon.at(episode);
        let rollouts = if cfg.concurrent { 1 } else { model.num_agents };
        let mut train_return = 0.0;
        let mut abs_delta = 0.0;
        let mut update_count = 0usize;
        for k in 0..rollouts {
            let ep = {
                let agents_ref = &agents;
                rollout_with(
                    model,
                    |jh, _| {
                        (0..model.num_agents)
                            .map(|i| {
                                epsilon_greedy(
                                    &agents_ref[i].q.row(jh.agent(i)),
                                    eps,
                                    &mut explore_rng,
                                )
                            })
                            .collect()
                    },
                    &mut env_rng,
                    seed,
                )?
            };
            if k == 0 {
                train_return = ep.total_reward();
            }
            let updating: Vec<usize> = if cfg.concurrent {
                (0..model.num_agents).collect()
            } else {
                vec![k]
            };
            for &i in &updating {
                let mut h = LocalHistory::empty();
                for (t, step) in ep.steps.iter().enumerate() {
                    let (a, o) = (step.joint_action[i], step.joint_obs[i]);
                    let h_next = h.appended(a, o);
                    let terminal =
                        t + 1 >= model.horizon || model.is_terminal(ep.states[t + 1]);
                    let agent = &mut agents[i];
                    let delta = match algo {
                        TabularAlgo::Iql { alpha } => iql_update(
                            &mut agent.q, &h, a, step.reward, &h_next, terminal, alpha, cfg.gamma,
                        ),
                        TabularAlgo::DistributedQ => {
                            let grew = distributed_q_update(
                                &mut agent.q,
                                &mut agent.policy_store,
                                &h,
                                a,
                                step.reward,
                                &h_next,
                                terminal,
                                cfg.gamma,
                            );
                            if grew { 1.0 } else { 0.0 }
                        }
                        TabularAlgo::Hysteretic { alpha, beta } => hysteretic_update(
                            &mut agent.q, &h, a, step.reward, &h_next, terminal, alpha, beta,
                            cfg.gamma,
                        ),
                        TabularAlgo::Lenient { alpha, .. } => {
                            let lenient = agent.lenient.as_mut().expect("lenient state");
                            let (d, _) = lenient_update(
                                &mut agent.q,
                                lenient,
                                &h,
                                a,
                                step.reward,
                                &h_next,
                                terminal,
                                alpha,
                                cfg.gamma,
                                &mut lenient_rng,
                            );
                            d
                        }
                    };
                    abs_delta += delta.abs();
                    update_count += 1;
                    h = h_next;
                }
                if agents[i].q.len() > cfg.memory_cap {
                    return Err(LearnerError::BadConfig(format!(
                        "agent {i} exceeded the table memory cap {}",
                        cfg.memory_cap
                    )));
                }
            }
        }
        let eval_return = if cfg.eval.due(episode, cfg.episodes) {
            let greedy: Vec<GreedyTabularPolicy> =
                agents.iter().map(TabularAgent::greedy).collect();
            Some(greedy_eval(model, &greedy, &stream, episode, cfg.eval.rollouts)?)
        } else {
            None
        };
        rows.push(EpisodeRow {
            episode,
            train_return,
            eval_return,
            loss: abs_delta / update_count.max(1) as f64,
            explore: eps,
        });
    }
    Ok(TabularRun { agents, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use marl_core::rng::STREAM_REPLAY;

    fn h0() -> LocalHistory {
        LocalHistory::empty()
    }

    fn h1() -> LocalHistory {
        LocalHistory::empty().appended(0, 0)
    }

    #[test]
    fn iql_update_arithmetic() {
        let mut q = TabularQ::new(3, 0.0);
        let d = iql_update(&mut q, &h0(), 1, 1.0, &h1(), false, 0.5, 0.9);
        assert!((d - 1.0).abs() < 1e-15);
        assert!((q.get(&h0(), 1) - 0.5).abs() < 1e-15);
        // only that entry changed
        assert_eq!(q.get(&h0(), 0), 0.0);
        assert_eq!(q.get(&h1(), 0), 0.0);
    }

    #[test]
    fn iql_terminal_bootstraps_zero() {
        let mut q = TabularQ::new(2, 0.0);
        q.row_mut(&h1())[0] = 100.0; // must be ignored at terminal
        iql_update(&mut q, &h0(), 0, 2.0, &h1(), true, 0.25, 0.9);
        assert!((q.get(&h0(), 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn distributed_q_keeps_higher_values() {
        let mut q = TabularQ::new(2, 0.0);
        let mut store = HashMap::new();
        q.row_mut(&h0())[0] = 1.0;
        // target 0.5 < current
        assert!(!distributed_q_update(&mut q, &mut store, &h0(), 0, 0.5, &h1(), true, 1.0));
        assert_eq!(q.get(&h0(), 0), 1.0);
        assert!(store.is_empty());
        // target 0.5 > 0 at a fresh entry, but not the best action: no store
        assert!(distributed_q_update(&mut q, &mut store, &h0(), 1, 0.5, &h1(), true, 1.0));
        assert_eq!(q.get(&h0(), 1), 0.5);
        assert!(store.is_empty());
        // growing past the old best records the policy
        assert!(distributed_q_update(&mut q, &mut store, &h0(), 1, 2.0, &h1(), true, 1.0));
        assert_eq!(store[&h0()], 1);
    }

    #[test]
    fn distributed_q_store_records_fresh_best() {
        let mut q = TabularQ::new(2, 0.0);
        let mut store = HashMap::new();
        assert!(distributed_q_update(&mut q, &mut store, &h0(), 0, 0.5, &h1(), true, 1.0));
        assert_eq!(q.get(&h0(), 0), 0.5);
        assert_eq!(store[&h0()], 0);
    }

    #[test]
    fn hysteretic_asymmetry() {
        let mut q = TabularQ::new(2, 0.0);
        let d = hysteretic_update(&mut q, &h0(), 0, 1.0, &h1(), true, 0.1, 0.01, 1.0);
        assert!((d - 1.0).abs() < 1e-15);
        assert!((q.get(&h0(), 0) - 0.1).abs() < 1e-15);
        let mut q = TabularQ::new(2, 0.0);
        let d = hysteretic_update(&mut q, &h0(), 0, -1.0, &h1(), true, 0.1, 0.01, 1.0);
        assert!((d + 1.0).abs() < 1e-15);
        assert!((q.get(&h0(), 0) + 0.01).abs() < 1e-15);
    }

    #[test]
    fn hysteretic_with_equal_rates_is_iql_bit_for_bit() {
        let mut q1 = TabularQ::new(3, 0.0);
        let mut q2 = TabularQ::new(3, 0.0);
        let updates = [
            (0usize, 1.0f64, false),
            (1, -2.0, false),
            (0, 0.5, true),
            (2, 3.0, false),
            (1, -0.25, true),
        ];
        for &(a, r, term) in &updates {
            iql_update(&mut q1, &h0(), a, r, &h1(), term, 0.3, 0.9);
            hysteretic_update(&mut q2, &h0(), a, r, &h1(), term, 0.3, 0.3, 0.9);
        }
        for a in 0..3 {
            assert_eq!(q1.get(&h0(), a).to_bits(), q2.get(&h0(), a).to_bits());
        }
    }

    #[test]
    fn hysteretic_magnitude_monotone_in_beta() {
        let mut prev = f64::NEG_INFINITY;
        for beta in [0.01, 0.05, 0.1] {
            let mut q = TabularQ::new(2, 0.0);
            hysteretic_update(&mut q, &h0(), 0, -1.0, &h1(), true, 0.1, beta, 1.0);
            let magnitude = -q.get(&h0(), 0);
            assert!(magnitude > prev);
            prev = magnitude;
        }
    }

    #[test]
    fn lenient_positive_delta_always_applies() {
        let mut q = TabularQ::new(2, 0.0);
        let mut lenient = LenientState::new(50.0, 0.99, 2.0);
        let mut rng = RngStream::new(0).split(STREAM_REPLAY);
        let (d, applied) =
            lenient_update(&mut q, &mut lenient, &h0(), 0, 1.0, &h1(), true, 0.5, 1.0, &mut rng);
        assert!(d > 0.0);
        assert!(applied);
        assert!((q.get(&h0(), 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lenient_high_temperature_ignores_negative_updates() {
        let mut q = TabularQ::new(2, 0.0);
        let mut lenient = LenientState::new(100.0, 0.9999, 5.0);
        let mut rng = RngStream::new(1).split(STREAM_REPLAY);
        for _ in 0..200 {
            lenient_update(&mut q, &mut lenient, &h0(), 0, -1.0, &h1(), true, 0.5, 1.0, &mut rng);
        }
        // exp(-K T) ~ 0: the threshold 1 - exp(-KT) ~ 1 means draws never exceed it
        assert_eq!(q.get(&h0(), 0), 0.0);
    }

    #[test]
    fn lenient_zero_temperature_behaves_like_iql() {
        let mut q = TabularQ::new(2, 0.0);
        let mut lenient = LenientState::new(50.0, 0.5, 2.0);
        // crush the temperature first
        let mut rng = RngStream::new(2).split(STREAM_REPLAY);
        for _ in 0..200 {
            lenient_update(&mut q, &mut lenient, &h0(), 0, 0.0, &h1(), true, 0.5, 1.0, &mut rng);
        }
        assert!(lenient.temperature(&h0(), 0) < 1e-20);
        let before = q.get(&h0(), 0);
        let (_, applied) =
            lenient_update(&mut q, &mut lenient, &h0(), 0, -4.0, &h1(), true, 0.5, 1.0, &mut rng);
        assert!(applied, "negative update must apply at zero temperature");
        assert!(q.get(&h0(), 0) < before);
    }

    #[test]
    fn lenient_temperatures_never_increase() {
        let mut q = TabularQ::new(2, 0.0);
        let mut lenient = LenientState::new(10.0, 0.95, 1.0);
        let mut rng = RngStream::new(3).split(STREAM_REPLAY);
        let mut last = lenient.temperature(&h0(), 0);
        for _ in 0..50 {
            lenient_update(&mut q, &mut lenient, &h0(), 0, -1.0, &h1(), true, 0.5, 1.0, &mut rng);
            let now = lenient.temperature(&h0(), 0);
            assert!(now <= last && now >= 0.0);
            last = now;
        }
    }

    #[test]
    fn hysteretic_config_rejects_beta_above_alpha() {
        assert!(TabularAlgo::Hysteretic { alpha: 0.1, beta: 0.2 }.validate().is_err());
        assert!(TabularAlgo::Hysteretic { alpha: 0.2, beta: 0.2 }.validate().is_ok());
    }
}
