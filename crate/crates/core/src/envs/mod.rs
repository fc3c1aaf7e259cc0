//! Concrete micro-environments exercising every algorithm family.
//!
//! - [`make_dec_tiger`]: the two-agent tiger problem - partial observability
//!   and information gathering.
//! - [`make_climb_game`]: a one-shot cooperative matrix game with two
//!   coordinated optima and severe miscoordination penalties.
//! - [`make_grid_mmdp`]: a deterministic, fully observable grid - the MMDP
//!   testbed for centralized baselines and the distributed-Q equivalence.
//! - [`Rendezvous1D`]: a continuous-action rendezvous task for the
//!   deterministic-policy-gradient learner.

mod climb;
mod dectiger;
mod gridmmdp;
mod rendezvous;

pub use climb::{climb_default_matrix, make_climb_game, make_climb_game_with_noise};
pub use dectiger::{make_dec_tiger, DT_LISTEN, DT_OPEN_LEFT, DT_OPEN_RIGHT};
pub use gridmmdp::{make_grid_mmdp, GridSpec};
pub use rendezvous::{ContinuousEpisode, ContinuousStep, Rendezvous1D};
