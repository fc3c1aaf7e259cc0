//! Exact, exhaustive ground truth at desk scale: belief tracking, Bellman
//! evaluation of joint policies, brute-force optimal joint policy search, and
//! policy-space counting.

mod belief;
mod brute;
mod count;
mod evaluate;
mod tree;

pub use belief::{belief_from_history, belief_update, Belief};
pub use brute::{brute_force_optimal, BruteForceResult, DEFAULT_ENUMERATION_CAP};
pub use count::{count_policies, obs_history_count, PolicyCounts};
pub use evaluate::{evaluate_joint_policy, evaluate_joint_policy_fn, evaluate_joint_q};
pub use tree::PolicyTree;
