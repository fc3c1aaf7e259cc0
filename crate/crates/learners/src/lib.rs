//! Learners over the Dec-POMDP core: decentralized value-based methods,
//! value-function factorization, policy-gradient methods, and centralized
//! baselines.
//!
//! Every trainer is deterministic given a seed: environment, exploration,
//! initialization, and replay draws run on the fixed substreams documented
//! in `marl_core::rng`.

pub mod common;
pub mod cte;
pub mod ctde;
pub mod dte;
pub mod pg;

pub use common::{EpisodeRow, EpsilonSchedule};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnerError {
    #[error(transparent)]
    Core(#[from] marl_core::CoreError),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("replay buffers misaligned: {0}")]
    Misaligned(String),
    #[error("empty replay buffer")]
    EmptyBuffer,
    #[error(transparent)]
    Autodiff(#[from] marl_autodiff::AdError),
}
