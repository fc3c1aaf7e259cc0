//! A continuous-action rendezvous task on the real line.
//!
//! Two agents pick velocities in [-1, 1]; positions are updated with an Euler
//! step and clipped to [-5, 5]. Each agent observes its own position plus
//! Gaussian noise. The shared reward is
//! `-|x1 - x2| - mean_i |x_i - target|`, which is always <= 0 and zero only
//! with both agents exactly on the target.
//!
//! Continuous state and action spaces do not fit the indexed-finite
//! [`crate::DecPomdpModel`], so this environment is its own type; it is
//! consumed only by the deterministic-policy-gradient learner.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::rng::Rng;

#[derive(Debug, Clone, Copy)]
pub struct Rendezvous1D {
    pub horizon: usize,
    pub noise_sigma: f64,
    pub start: [f64; 2],
    pub target: f64,
}

impl Default for Rendezvous1D {
    fn default() -> Self {
        Self {
            horizon: 10,
            noise_sigma: 0.1,
            start: [-2.0, 2.0],
            target: 0.0,
        }
    }
}

pub const POS_BOUND: f64 = 5.0;
pub const ACTION_BOUND: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousStep {
    pub actions: [f64; 2],
    pub reward: f64,
    pub observations: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContinuousEpisode {
    pub steps: Vec<ContinuousStep>,
    pub positions: Vec<[f64; 2]>,
}

impl Rendezvous1D {
    pub fn new(horizon: usize, noise_sigma: f64) -> Self {
        Self {
            horizon,
            noise_sigma,
            ..Self::default()
        }
    }

    pub fn clip_action(a: f64) -> f64 {
        a.clamp(-ACTION_BOUND, ACTION_BOUND)
    }

    /// Deterministic position update: `x <- clip(x + a)`.
    pub fn update(&self, x: f64, a: f64) -> f64 {
        (x + Self::clip_action(a)).clamp(-POS_BOUND, POS_BOUND)
    }

    /// Shared reward at a joint position.
    pub fn reward(&self, x1: f64, x2: f64) -> f64 {
        -(x1 - x2).abs() - 0.5 * ((x1 - self.target).abs() + (x2 - self.target).abs())
    }

    /// Noisy own-position observation.
    pub fn observe(&self, x: f64, rng: &mut Rng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        x + self.noise_sigma * z
    }

    /// One environment step from positions `xs` under joint action `acts`.
    pub fn step(&self, xs: [f64; 2], acts: [f64; 2], rng: &mut Rng) -> (f64, [f64; 2], [f64; 2]) {
        let next = [self.update(xs[0], acts[0]), self.update(xs[1], acts[1])];
        let reward = self.reward(next[0], next[1]);
        let obs = [self.observe(next[0], rng), self.observe(next[1], rng)];
        (reward, obs, next)
    }

    /// Roll out a joint action-selection closure for `horizon` steps.
    pub fn rollout_with<F>(&self, mut select: F, rng: &mut Rng) -> ContinuousEpisode
    where
        F: FnMut(&ContinuousEpisode, &mut Rng) -> [f64; 2],
    {
        let mut ep = ContinuousEpisode {
            steps: Vec::with_capacity(self.horizon),
            positions: vec![self.start],
        };
        let mut xs = self.start;
        for _ in 0..self.horizon {
            let acts = select(&ep, rng);
            let acts = [Self::clip_action(acts[0]), Self::clip_action(acts[1])];
            let (reward, obs, next) = self.step(xs, acts, rng);
            ep.steps.push(ContinuousStep {
                actions: acts,
                reward,
                observations: obs,
            });
            ep.positions.push(next);
            xs = next;
        }
        ep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngStream, STREAM_ENV};

    #[test]
    fn reward_zero_at_target() {
        let env = Rendezvous1D::default();
        assert_eq!(env.reward(0.0, 0.0), 0.0);
    }

    #[test]
    fn reward_never_positive() {
        let env = Rendezvous1D::default();
        let mut rng = RngStream::new(5).split(STREAM_ENV);
        for _ in 0..1000 {
            let x1 = rng.gen_range(-5.0..5.0);
            let x2 = rng.gen_range(-5.0..5.0);
            assert!(env.reward(x1, x2) <= 0.0);
        }
    }

    #[test]
    fn positions_clip_to_bounds() {
        let env = Rendezvous1D::default();
        assert_eq!(env.update(4.8, 0.9), 5.0);
        assert_eq!(env.update(-4.9, -3.0), -5.0); // action clipped to -1 first
        assert_eq!(env.update(0.0, 0.25), 0.25);
    }
}
