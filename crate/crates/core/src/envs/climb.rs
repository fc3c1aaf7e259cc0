//! A one-shot cooperative matrix game with a coordination pathology.
//!
//! The default payoff matrix has two coordinated optima worth 11, a safe
//! action pair worth 5, and -30 for any miscoordination between the two
//! optimal actions. Expected-value learners get pulled toward the safe
//! action by teammate exploration; optimistic learners do not.

use crate::error::CoreError;
use crate::model::DecPomdpModel;

/// The default calibration matrix (rows: agent 1 action, cols: agent 2).
pub fn climb_default_matrix() -> [[f64; 3]; 3] {
    [
        [11.0, -30.0, 0.0],
        [-30.0, 11.0, 0.0],
        [0.0, 0.0, 5.0],
    ]
}

/// Horizon-1 stateless model paying exactly the given matrix.
pub fn make_climb_game(matrix: [[f64; 3]; 3]) -> Result<DecPomdpModel, CoreError> {
    make_climb_game_with_noise(matrix, 0.0)
}

/// Variant with symmetric reward noise: a hidden coin flip at reset shifts
/// every payoff by +/- `noise`, leaving expectations equal to the matrix.
pub fn make_climb_game_with_noise(
    matrix: [[f64; 3]; 3],
    noise: f64,
) -> Result<DecPomdpModel, CoreError> {
    if noise < 0.0 {
        return Err(CoreError::BadParameter("noise must be nonnegative".into()));
    }
    let num_states = if noise == 0.0 { 1 } else { 2 };
    let num_ja = 9;
    let mut reward = vec![vec![0.0; num_ja]; num_states];
    for s in 0..num_states {
        let shift = if num_states == 1 {
            0.0
        } else if s == 0 {
            noise
        } else {
            -noise
        };
        for a1 in 0..3 {
            for a2 in 0..3 {
                reward[s][a1 * 3 + a2] = matrix[a1][a2] + shift;
            }
        }
    }
    let transition = vec![vec![vec![1.0 / num_states as f64; num_states]; num_ja]; num_states];
    let observation = vec![vec![vec![1.0]; num_states]; num_ja];
    let model = DecPomdpModel {
        name: "climb".into(),
        num_agents: 2,
        num_states,
        actions_per_agent: vec![3, 3],
        obs_per_agent: vec![1, 1],
        initial_belief: vec![1.0 / num_states as f64; num_states],
        horizon: 1,
        discount: 1.0,
        transition,
        reward,
        observation,
        terminal_states: vec![false; num_states],
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookups() {
        let m = make_climb_game(climb_default_matrix()).unwrap();
        assert_eq!(m.reward[0][m.joint_action_index(&[0, 0])], 11.0);
        assert_eq!(m.reward[0][m.joint_action_index(&[0, 1])], -30.0);
        assert_eq!(m.reward[0][m.joint_action_index(&[2, 2])], 5.0);
    }

    /// Brute-force optimum over the 9 joint actions.
    #[test]
    fn exhaustive_max_is_11() {
        let m = make_climb_game(climb_default_matrix()).unwrap();
        let best = (0..9).map(|ja| m.reward[0][ja]).fold(f64::MIN, f64::max);
        assert_eq!(best, 11.0);
    }

    #[test]
    fn noise_preserves_expectation() {
        let m = make_climb_game_with_noise(climb_default_matrix(), 2.0).unwrap();
        assert_eq!(m.num_states, 2);
        let ja = m.joint_action_index(&[0, 0]);
        let expected = m.expected_reward(&m.initial_belief.clone(), ja);
        assert!((expected - 11.0).abs() < 1e-12);
    }
}
