//! Dec-POMDP problem representation and exact ground truth for cooperative
//! multi-agent reinforcement learning.
//!
//! The crate has three layers:
//!
//! - problem representation: [`DecPomdpModel`], histories, policies, rollouts,
//!   and the shared exploration primitives,
//! - concrete micro-environments in [`envs`] (Dec-Tiger, a cooperative matrix
//!   game, a fully observable grid, and a continuous rendezvous task),
//! - exact oracles in [`oracle`]: belief filtering, Bellman evaluation of
//!   joint policies, brute-force optimal policy search, and policy-space
//!   counting.
//!
//! Everything is deterministic given a seed: all randomness flows through
//! [`rng::RngStream`].

pub mod envs;
pub mod episode;
pub mod error;
pub mod explore;
pub mod history;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod rng;

pub use episode::{discounted_return, rollout, Episode, Step};
pub use error::CoreError;
pub use explore::{argmax_tie_low, epsilon_greedy};
pub use history::{JointHistory, LocalHistory};
pub use model::DecPomdpModel;
pub use policy::{DeterministicJointPolicy, DeterministicPolicy, StochasticPolicy};
pub use rng::RngStream;

/// Tolerance used when validating probability vectors.
pub const PROB_TOL: f64 = 1e-12;
