//! A deterministic, fully observable two-agent grid (an MMDP).
//!
//! Both agents move on an n x n grid with actions up/down/left/right/stay
//! (moves into walls are clipped). The state is the pair of positions and
//! every agent observes it exactly. Entering the joint goal configuration
//! (agent 1 at the top-left corner, agent 2 at the bottom-right corner) pays
//! +1 once; the goal state is absorbing and terminal. Agents start on the
//! opposite corners, so they must swap sides.

use crate::error::CoreError;
use crate::model::DecPomdpModel;

pub const GRID_ACTIONS: usize = 5; // up, down, left, right, stay

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub n: usize,
    pub horizon: usize,
    pub discount: f64,
}

fn step_cell(n: usize, cell: usize, action: usize) -> usize {
    let (r, c) = (cell / n, cell % n);
    let (nr, nc) = match action {
        0 => (r.saturating_sub(1), c),
        1 => ((r + 1).min(n - 1), c),
        2 => (r, c.saturating_sub(1)),
        3 => (r, (c + 1).min(n - 1)),
        _ => (r, c),
    };
    nr * n + nc
}

/// Build the grid MMDP. `n >= 2`.
pub fn make_grid_mmdp(spec: GridSpec) -> Result<DecPomdpModel, CoreError> {
    let GridSpec { n, horizon, discount } = spec;
    if n < 2 {
        return Err(CoreError::BadParameter(format!("grid size {n} must be >= 2")));
    }
    let cells = n * n;
    let num_states = cells * cells;
    let goal1 = 0;
    let goal2 = cells - 1;
    let goal_state = goal1 * cells + goal2;
    let start_state = goal2 * cells + goal1; // agents start on swapped corners
    let num_ja = GRID_ACTIONS * GRID_ACTIONS;

    let mut transition = vec![vec![vec![0.0; num_states]; num_ja]; num_states];
    let mut reward = vec![vec![0.0; num_ja]; num_states];
    // identity observation: each agent sees the full next state
    let mut observation = vec![vec![vec![0.0; num_states * num_states]; num_states]; num_ja];

    for s in 0..num_states {
        let (p1, p2) = (s / cells, s % cells);
        for a1 in 0..GRID_ACTIONS {
            for a2 in 0..GRID_ACTIONS {
                let ja = a1 * GRID_ACTIONS + a2;
                let s_next = if s == goal_state {
                    goal_state
                } else {
                    step_cell(n, p1, a1) * cells + step_cell(n, p2, a2)
                };
                transition[s][ja][s_next] = 1.0;
                if s != goal_state && s_next == goal_state {
                    reward[s][ja] = 1.0;
                }
            }
        }
    }
    for obs_row in observation.iter_mut() {
        for (s_next, row) in obs_row.iter_mut().enumerate() {
            row[s_next * num_states + s_next] = 1.0;
        }
    }

    let mut initial_belief = vec![0.0; num_states];
    initial_belief[start_state] = 1.0;
    let mut terminal_states = vec![false; num_states];
    terminal_states[goal_state] = true;

    let model = DecPomdpModel {
        name: format!("gridmmdp{n}"),
        num_agents: 2,
        num_states,
        actions_per_agent: vec![GRID_ACTIONS, GRID_ACTIONS],
        obs_per_agent: vec![num_states, num_states],
        initial_belief,
        horizon,
        discount,
        transition,
        reward,
        observation,
        terminal_states,
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_grid() {
        assert!(make_grid_mmdp(GridSpec { n: 1, horizon: 3, discount: 0.95 }).is_err());
    }

    #[test]
    fn observation_is_identity_on_states() {
        let m = make_grid_mmdp(GridSpec { n: 2, horizon: 3, discount: 0.95 }).unwrap();
        assert!(m.is_fully_observable());
    }

    #[test]
    fn transitions_are_deterministic() {
        let m = make_grid_mmdp(GridSpec { n: 3, horizon: 5, discount: 0.95 }).unwrap();
        for s in 0..m.num_states {
            for ja in 0..m.num_joint_actions() {
                assert_eq!(
                    m.transition[s][ja].iter().filter(|&&p| p == 1.0).count(),
                    1
                );
            }
        }
    }

    #[test]
    fn goal_is_absorbing_and_pays_once() {
        let n = 2;
        let m = make_grid_mmdp(GridSpec { n, horizon: 4, discount: 0.95 }).unwrap();
        let cells = n * n;
        let goal = cells - 1; // goal1 * cells + goal2 with goal1 = 0
        // one step before the goal: agent 1 at cell 1 (needs left), agent 2 at cell 2 (needs right)
        let pre = 1 * cells + 2;
        let ja = 2 * GRID_ACTIONS + 3; // (left, right)
        assert_eq!(m.reward[pre][ja], 1.0);
        assert_eq!(m.transition[pre][ja][goal], 1.0);
        for ja in 0..m.num_joint_actions() {
            assert_eq!(m.reward[goal][ja], 0.0);
            assert_eq!(m.transition[goal][ja][goal], 1.0);
        }
        assert!(m.terminal_states[goal]);
    }
}
