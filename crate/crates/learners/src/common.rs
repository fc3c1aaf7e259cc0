//! Shared trainer plumbing: exploration schedules, metric rows, and greedy
//! evaluation.

use marl_core::{rollout, CoreError, DecPomdpModel, DeterministicJointPolicy, RngStream};

/// Linear epsilon decay from `start` to `end` over the first `decay_episodes`
/// episodes, constant afterwards.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    pub decay_episodes: usize,
}

impl EpsilonSchedule {
    pub fn constant(eps: f64) -> Self {
        Self { start: eps, end: eps, decay_episodes: 1 }
    }

    pub fn at(&self, episode: usize) -> f64 {
        if self.decay_episodes == 0 || episode >= self.decay_episodes {
            return self.end;
        }
        let frac = episode as f64 / self.decay_episodes as f64;
        self.start + (self.end - self.start) * frac
    }
}

/// One metrics row per training episode. `eval_return` is present only on
/// evaluation episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRow {
    pub episode: usize,
    pub train_return: f64,
    pub eval_return: Option<f64>,
    pub loss: f64,
    pub explore: f64,
}

/// Mean greedy return over `rollouts` noise-free rollouts on the evaluation
/// RNG stream.
pub fn greedy_eval(
    model: &DecPomdpModel,
    policy: &impl DeterministicJointPolicy,
    stream: &RngStream,
    episode: usize,
    rollouts: usize,
) -> Result<f64, CoreError> {
    let mut total = 0.0;
    for k in 0..rollouts {
        let mut rng = stream.split(marl_core::rng::STREAM_EVAL + (episode * 1009 + k) as u64);
        let ep = rollout(model, policy, &mut rng, stream.seed())?;
        total += ep.total_reward();
    }
    Ok(total / rollouts.max(1) as f64)
}

/// Evaluation cadence shared by all trainers.
#[derive(Debug, Clone, Copy)]
pub struct EvalCadence {
    pub every: usize,
    pub rollouts: usize,
}

impl Default for EvalCadence {
    fn default() -> Self {
        Self { every: 100, rollouts: 10 }
    }
}

impl EvalCadence {
    pub fn due(&self, episode: usize, total: usize) -> bool {
        self.every > 0 && (episode % self.every == self.every - 1 || episode == total - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_schedule_decays_linearly() {
        let s = EpsilonSchedule { start: 1.0, end: 0.0, decay_episodes: 10 };
        assert_eq!(s.at(0), 1.0);
        assert!((s.at(5) - 0.5).abs() < 1e-12);
        assert_eq!(s.at(10), 0.0);
        assert_eq!(s.at(100), 0.0);
    }
}
