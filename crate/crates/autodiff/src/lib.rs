//! Minimal reverse-mode differentiation for small recurrent networks,
//! mixers, and hypernetworks.
//!
//! Everything is 64-bit; nets at desk scale are tiny, so determinism and
//! tight gradient-check tolerances beat speed. A [`tape::Tape`] records
//! primitive ops over values read from a [`params::ParamStore`]; backward
//! visits nodes in reverse creation order and accumulates gradients
//! additively. Target networks are plain snapshots of the store evaluated
//! through a throwaway tape, so the forward arithmetic is identical on both
//! paths.

pub mod cell;
pub mod gradcheck;
pub mod hypernet;
pub mod layers;
pub mod optim;
pub mod params;
pub mod tape;
pub mod tensor;

pub use cell::RecurrentCell;
pub use gradcheck::{grad_check, rel_err};
pub use hypernet::Hypernet;
pub use layers::{Linear, Mlp};
pub use optim::{Optimizer, OptimizerKind};
pub use params::{ParamId, ParamStore};
pub use tape::{Gradients, NodeId, Tape};
pub use tensor::Tensor;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdError {
    #[error("loss must be a scalar, got shape {0:?}")]
    NonScalarLoss(Vec<usize>),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}
