//! Policy interfaces: local stochastic and deterministic policies, plus the
//! joint view used by rollouts and the oracle.

use crate::history::{JointHistory, LocalHistory};
use crate::rng::{sample_categorical, Rng};

/// A stochastic local policy: a distribution over the agent's actions at each
/// local history. Probabilities must sum to 1 within 1e-12.
pub trait StochasticPolicy {
    fn num_actions(&self) -> usize;
    fn prob(&self, h: &LocalHistory, action: usize) -> f64;

    fn probs(&self, h: &LocalHistory) -> Vec<f64> {
        (0..self.num_actions()).map(|a| self.prob(h, a)).collect()
    }

    fn act(&self, h: &LocalHistory, rng: &mut Rng) -> usize {
        sample_categorical(&self.probs(h), rng)
    }
}

/// A deterministic local policy: history to action.
pub trait DeterministicPolicy {
    fn act(&self, h: &LocalHistory) -> usize;
}

/// A deterministic joint policy over joint histories. Decentralized policies
/// implement this by consulting each agent's component; centralized (MPOMDP)
/// policies may condition each action on the full joint history.
pub trait DeterministicJointPolicy {
    fn act_joint(&self, jh: &JointHistory) -> Vec<usize>;
}

impl<P: DeterministicPolicy> DeterministicJointPolicy for Vec<P> {
    fn act_joint(&self, jh: &JointHistory) -> Vec<usize> {
        self.iter()
            .enumerate()
            .map(|(i, p)| p.act(jh.agent(i)))
            .collect()
    }
}

impl<P: DeterministicPolicy + ?Sized> DeterministicPolicy for Box<P> {
    fn act(&self, h: &LocalHistory) -> usize {
        (**self).act(h)
    }
}

/// A fixed-action policy, mostly for tests and baselines.
#[derive(Debug, Clone)]
pub struct ConstantPolicy(pub usize);

impl DeterministicPolicy for ConstantPolicy {
    fn act(&self, _h: &LocalHistory) -> usize {
        self.0
    }
}

impl StochasticPolicy for ConstantPolicy {
    fn num_actions(&self) -> usize {
        self.0 + 1
    }
    fn prob(&self, _h: &LocalHistory, action: usize) -> f64 {
        if action == self.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// Uniform-random stochastic policy over a fixed action count.
#[derive(Debug, Clone)]
pub struct UniformPolicy {
    pub num_actions: usize,
}

impl StochasticPolicy for UniformPolicy {
    fn num_actions(&self) -> usize {
        self.num_actions
    }
    fn prob(&self, _h: &LocalHistory, _action: usize) -> f64 {
        1.0 / self.num_actions as f64
    }
}

/// Adapter running one stochastic policy per agent as a joint policy with a
/// shared RNG (draws in agent index order).
pub struct StochasticJoint<'a, P: StochasticPolicy> {
    pub agents: &'a [P],
}

impl<P: StochasticPolicy> StochasticJoint<'_, P> {
    pub fn act_joint(&self, jh: &JointHistory, rng: &mut Rng) -> Vec<usize> {
        self.agents
            .iter()
            .enumerate()
            .map(|(i, p)| p.act(jh.agent(i), rng))
            .collect()
    }
}
