//! Decentralized training and execution: tabular independent Q-learning and
//! its optimistic variants, deep recurrent Q-learning, and concurrent
//! replay.

mod cert;
mod diag;
mod drqn;
mod tabular;

pub use cert::{cert_sample, check_alignment, AgentReplay, LocalEpisode, LocalStep};
pub use diag::empirical_joint_conditional;
pub use drqn::{
    dec_hdrqn_step, idrqn_step, train_drqn, DrqnAgent, DrqnConfig, DrqnRun, QNet,
};
pub use tabular::{
    distributed_q_update, hysteretic_update, iql_update, lenient_update, train_tabular,
    GreedyTabularPolicy, LenientState, TabularAgent, TabularAlgo, TabularConfig, TabularQ,
    TabularRun,
};
