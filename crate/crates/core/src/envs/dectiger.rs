//! The two-agent Dec-Tiger problem.
//!
//! Two states (tiger behind the left or right door), three actions per agent
//! (listen, open-left, open-right), two observations (hear-left, hear-right).
//! When both agents listen the state is unchanged and each agent independently
//! hears the tiger's side with accuracy `p`. Opening any door resets the state
//! uniformly and yields an uninformative uniform joint observation.
//!
//! The reward table follows the canonical values from the literature:
//! both listen -2; both open the treasure door +20; both open the tiger door
//! -50; opening different doors -100; one opens the treasure door while the
//! other listens +9; one opens the tiger door while the other listens -101.

use crate::error::CoreError;
use crate::model::DecPomdpModel;

pub const DT_LISTEN: usize = 0;
pub const DT_OPEN_LEFT: usize = 1;
pub const DT_OPEN_RIGHT: usize = 2;

const TIGER_LEFT: usize = 0;

fn reward(state: usize, a1: usize, a2: usize) -> f64 {
    let tiger_door = if state == TIGER_LEFT { DT_OPEN_LEFT } else { DT_OPEN_RIGHT };
    let treasure_door = if state == TIGER_LEFT { DT_OPEN_RIGHT } else { DT_OPEN_LEFT };
    let listens = (a1 == DT_LISTEN) as usize + (a2 == DT_LISTEN) as usize;
    match listens {
        2 => -2.0,
        1 => {
            let opener = if a1 == DT_LISTEN { a2 } else { a1 };
            if opener == treasure_door {
                9.0
            } else {
                -101.0
            }
        }
        _ => {
            if a1 == treasure_door && a2 == treasure_door {
                20.0
            } else if a1 == tiger_door && a2 == tiger_door {
                -50.0
            } else {
                -100.0
            }
        }
    }
}

/// Build the Dec-Tiger model with the given horizon and hearing accuracy `p`.
pub fn make_dec_tiger(horizon: usize, p: f64) -> Result<DecPomdpModel, CoreError> {
    if !(p > 0.5 && p <= 1.0) {
        return Err(CoreError::BadParameter(format!(
            "hearing accuracy p = {p} must satisfy 0.5 < p <= 1"
        )));
    }
    let num_states = 2;
    let actions = vec![3, 3];
    let obs = vec![2, 2];
    let num_ja = 9;
    let num_jo = 4;

    let model_stub = DecPomdpModel {
        name: "dectiger".into(),
        num_agents: 2,
        num_states,
        actions_per_agent: actions.clone(),
        obs_per_agent: obs.clone(),
        initial_belief: vec![0.5, 0.5],
        horizon,
        discount: 1.0,
        transition: Vec::new(),
        reward: Vec::new(),
        observation: Vec::new(),
        terminal_states: vec![false; num_states],
    };

    let mut transition = vec![vec![vec![0.0; num_states]; num_ja]; num_states];
    let mut reward_t = vec![vec![0.0; num_ja]; num_states];
    let mut observation = vec![vec![vec![0.0; num_jo]; num_states]; num_ja];

    for s in 0..num_states {
        for ja in 0..num_ja {
            let a = model_stub.joint_action_from_index(ja);
            let both_listen = a[0] == DT_LISTEN && a[1] == DT_LISTEN;
            reward_t[s][ja] = reward(s, a[0], a[1]);
            if both_listen {
                transition[s][ja][s] = 1.0;
            } else {
                transition[s][ja] = vec![0.5, 0.5];
            }
        }
    }
    for ja in 0..num_ja {
        let a = model_stub.joint_action_from_index(ja);
        let both_listen = a[0] == DT_LISTEN && a[1] == DT_LISTEN;
        for s_next in 0..num_states {
            for jo in 0..num_jo {
                let o = model_stub.joint_obs_from_index(jo);
                observation[ja][s_next][jo] = if both_listen {
                    // hear-left = 0 is "correct" in tiger-left; independence per agent
                    let p1 = if o[0] == s_next { p } else { 1.0 - p };
                    let p2 = if o[1] == s_next { p } else { 1.0 - p };
                    p1 * p2
                } else {
                    1.0 / num_jo as f64
                };
            }
        }
    }

    let model = DecPomdpModel {
        transition,
        reward: reward_t,
        observation,
        ..model_stub
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_accuracy() {
        assert!(make_dec_tiger(2, 0.5).is_err());
        assert!(make_dec_tiger(2, 1.01).is_err());
        assert!(make_dec_tiger(2, 1.0).is_ok());
    }

    #[test]
    fn both_listen_observation_independence() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        let ja = m.joint_action_index(&[DT_LISTEN, DT_LISTEN]);
        let jo = m.joint_obs_index(&[0, 0]); // both hear-left
        assert!((m.observation[ja][TIGER_LEFT][jo] - 0.7225).abs() < 1e-12);
    }

    #[test]
    fn both_open_left_expected_reward_is_minus_15() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        let ja = m.joint_action_index(&[DT_OPEN_LEFT, DT_OPEN_LEFT]);
        let expected = m.expected_reward(&[0.5, 0.5], ja);
        assert!((expected - (0.5 * 20.0 + 0.5 * -50.0)).abs() < 1e-12);
        assert!((expected + 15.0).abs() < 1e-12);
    }

    #[test]
    fn agent_swap_symmetry() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        for s in 0..2 {
            for ja in 0..9 {
                let a = m.joint_action_from_index(ja);
                let swapped = m.joint_action_index(&[a[1], a[0]]);
                assert_eq!(m.reward[s][ja], m.reward[s][swapped]);
                for jo in 0..4 {
                    let o = m.joint_obs_from_index(jo);
                    let jo_swapped = m.joint_obs_index(&[o[1], o[0]]);
                    assert_eq!(
                        m.observation[ja][s][jo],
                        m.observation[swapped][s][jo_swapped]
                    );
                }
            }
        }
    }

    #[test]
    fn opening_resets_uniformly_with_uniform_obs() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        let ja = m.joint_action_index(&[DT_LISTEN, DT_OPEN_RIGHT]);
        for s in 0..2 {
            assert_eq!(m.transition[s][ja], vec![0.5, 0.5]);
            for jo in 0..4 {
                assert_eq!(m.observation[ja][s][jo], 0.25);
            }
        }
    }
}
