//! Centralized training and execution baselines: joint Q-learning on the
//! MMDP and MPOMDP, exact value iteration for fully observable ground truth,
//! and trivial decentralization of MMDP policies.

mod central_q;
mod value_iteration;

pub use central_q::{
    decentralize_mmdp_policy, mmdp_q_update, mpomdp_q_update, recompose_mmdp_policy,
    train_central_mmdp, train_central_mpomdp, CentralConfig, CentralMmdpRun, CentralMpomdpRun,
    JointQTable, MpomdpGreedy,
};
pub use value_iteration::{value_iteration, ValueIteration};
