//! Exact finite-horizon backward induction for fully observable models.

use marl_core::{CoreError, DecPomdpModel};

/// Optimal state values and joint-action values at the horizon head
/// (`horizon` steps to go). For absorbing-goal models with a horizon past
/// the settling depth these equal the stationary optimum exactly.
#[derive(Debug, Clone)]
pub struct ValueIteration {
    /// `q[s][ja]` with `horizon` steps to go; all-zero rows at terminal states.
    pub q: Vec<Vec<f64>>,
    /// `v[s] = max_ja q[s][ja]`, 0 at terminal states.
    pub v: Vec<f64>,
}

/// Backward induction over the model's horizon. Rejects partially
/// observable models: agents must observe the full state.
pub fn value_iteration(model: &DecPomdpModel) -> Result<ValueIteration, CoreError> {
    if !model.is_fully_observable() {
        return Err(CoreError::NotFullyObservable("value iteration"));
    }
    let n_s = model.num_states;
    let n_ja = model.num_joint_actions();
    let mut v = vec![0.0; n_s];
    let mut q = vec![vec![0.0; n_ja]; n_s];
    for _ in 0..model.horizon {
        let mut q_next = vec![vec![0.0; n_ja]; n_s];
        let mut v_next = vec![0.0; n_s];
        for s in 0..n_s {
            if model.is_terminal(s) {
                continue; // no action is ever taken at a terminal state
            }
            let mut best = f64::NEG_INFINITY;
            for ja in 0..n_ja {
                let mut val = model.reward[s][ja];
                if model.discount > 0.0 {
                    let future: f64 = model.transition[s][ja]
                        .iter()
                        .enumerate()
                        .map(|(s2, &p)| p * v[s2])
                        .sum();
                    val += model.discount * future;
                }
                q_next[s][ja] = val;
                if val > best {
                    best = val;
                }
            }
            v_next[s] = best;
        }
        q = q_next;
        v = v_next;
    }
    Ok(ValueIteration { q, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use marl_core::envs::{make_dec_tiger, make_grid_mmdp, GridSpec};

    #[test]
    fn rejects_partially_observable_models() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        assert!(matches!(
            value_iteration(&m),
            Err(CoreError::NotFullyObservable(_))
        ));
    }

    #[test]
    fn zero_discount_is_max_immediate_reward() {
        let mut m = make_grid_mmdp(GridSpec { n: 2, horizon: 3, discount: 0.0 }).unwrap();
        m.discount = 0.0;
        let vi = value_iteration(&m).unwrap();
        for s in 0..m.num_states {
            if m.is_terminal(s) {
                continue;
            }
            let max_r = (0..m.num_joint_actions())
                .map(|ja| m.reward[s][ja])
                .fold(f64::MIN, f64::max);
            assert_eq!(vi.v[s], max_r);
        }
    }

    /// Deterministic shortest path: start state needs both agents to travel
    /// distance d, so V* = gamma^(d-1).
    #[test]
    fn grid_start_value_is_discounted_arrival() {
        let gamma = 0.95;
        let m = make_grid_mmdp(GridSpec { n: 2, horizon: 10, discount: gamma }).unwrap();
        let vi = value_iteration(&m).unwrap();
        let start = m.initial_belief.iter().position(|&p| p == 1.0).unwrap();
        // both agents are 2 moves from their goals: reward arrives on step 2
        assert!((vi.v[start] - gamma).abs() < 1e-12);
    }
}
