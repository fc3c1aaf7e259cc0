//! Brute-force optimal joint policy search by exhaustive enumeration of
//! observation-history trees (sufficient for deterministic policies, and
//! half the exponent of action-observation trees).

use num_bigint::BigUint;

use crate::error::CoreError;
use crate::history::LocalHistory;
use crate::model::DecPomdpModel;
use crate::oracle::evaluate::evaluate_joint_policy_fn;
use crate::oracle::tree::PolicyTree;
use std::collections::HashMap;

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    /// The optimal joint policy as a dense action-observation tree.
    pub tree: PolicyTree,
    /// The optimal value `V*`.
    pub value: f64,
    /// `Q*(h_0, ja)` for every joint action: the best value attainable when
    /// the first joint action is forced to `ja`.
    pub root_q: Vec<f64>,
}

/// Node layout of an observation-history tree for one agent: sequences of
/// observations of length < H, ordered by length then lexicographically.
struct ObsTreeLayout {
    num_obs: usize,
    /// offsets[t] = index of the first length-t node
    offsets: Vec<usize>,
    total: usize,
}

impl ObsTreeLayout {
    fn new(num_obs: usize, horizon: usize) -> Self {
        let mut offsets = Vec::with_capacity(horizon);
        let mut total = 0usize;
        let mut level = 1usize;
        for _ in 0..horizon {
            offsets.push(total);
            total += level;
            level *= num_obs.max(1);
        }
        Self { num_obs, offsets, total }
    }

    fn node_index(&self, obs_seq: &[usize]) -> usize {
        let mut idx = 0usize;
        for &o in obs_seq {
            idx = idx * self.num_obs + o;
        }
        self.offsets[obs_seq.len()] + idx
    }
}

/// Exact argmax over all deterministic joint observation-history policies up
/// to horizon `max_h`. Errors when the joint policy count exceeds `cap`.
pub fn brute_force_optimal(
    model: &DecPomdpModel,
    max_h: usize,
    cap: u64,
) -> Result<BruteForceResult, CoreError> {
    let mut model = model.clone();
    model.horizon = max_h;

    let layouts: Vec<ObsTreeLayout> = (0..model.num_agents)
        .map(|i| ObsTreeLayout::new(model.obs_per_agent[i], max_h))
        .collect();

    let mut cardinality = BigUint::from(1u32);
    for (i, layout) in layouts.iter().enumerate() {
        cardinality *= BigUint::from(model.actions_per_agent[i]).pow(layout.total as u32);
    }
    if cardinality > BigUint::from(cap) {
        return Err(CoreError::Intractable {
            cardinality: cardinality.to_string(),
            cap,
        });
    }

    // one flat action assignment per agent, advanced as an odometer
    let mut assignment: Vec<Vec<usize>> = layouts.iter().map(|l| vec![0; l.total]).collect();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_assignment = assignment.clone();
    let mut root_q = vec![f64::NEG_INFINITY; model.num_joint_actions()];

    loop {
        let value = evaluate_joint_policy_fn(&model, |jh| {
            Ok((0..model.num_agents)
                .map(|i| assignment[i][layouts[i].node_index(&jh.agent(i).observations())])
                .collect())
        })?;
        let first_ja: Vec<usize> = (0..model.num_agents).map(|i| assignment[i][0]).collect();
        let ja_idx = model.joint_action_index(&first_ja);
        if value > root_q[ja_idx] {
            root_q[ja_idx] = value;
        }
        if value > best_value {
            best_value = value;
            best_assignment = assignment.clone();
        }
        if !advance(&mut assignment, &model.actions_per_agent) {
            break;
        }
    }

    let tree = assignment_to_tree(&model, &layouts, &best_assignment);
    Ok(BruteForceResult {
        tree,
        value: best_value,
        root_q,
    })
}

/// Odometer increment over per-agent flat assignments; false when exhausted.
fn advance(assignment: &mut [Vec<usize>], actions_per_agent: &[usize]) -> bool {
    for (i, slots) in assignment.iter_mut().enumerate() {
        for slot in slots.iter_mut() {
            *slot += 1;
            if *slot < actions_per_agent[i] {
                return true;
            }
            *slot = 0;
        }
    }
    false
}

/// Expand an observation-tree assignment into a dense action-observation
/// policy tree (every local history of length < H gets the action of its
/// observation projection).
fn assignment_to_tree(
    model: &DecPomdpModel,
    layouts: &[ObsTreeLayout],
    assignment: &[Vec<usize>],
) -> PolicyTree {
    let mut per_agent = Vec::with_capacity(model.num_agents);
    for i in 0..model.num_agents {
        let mut map = HashMap::new();
        let mut frontier = vec![LocalHistory::empty()];
        for _ in 0..model.horizon {
            let mut next = Vec::new();
            for h in &frontier {
                let action = assignment[i][layouts[i].node_index(&h.observations())];
                map.insert(h.clone(), action);
                for a in 0..model.actions_per_agent[i] {
                    for o in 0..model.obs_per_agent[i] {
                        next.push(h.appended(a, o));
                    }
                }
            }
            frontier = next;
        }
        per_agent.push(map);
    }
    PolicyTree::new(per_agent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{climb_default_matrix, make_climb_game, make_dec_tiger, DT_LISTEN};
    use crate::history::JointHistory;
    use crate::oracle::evaluate::evaluate_joint_policy;

    #[test]
    fn climb_optimum_is_11() {
        let m = make_climb_game(climb_default_matrix()).unwrap();
        let res = brute_force_optimal(&m, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(res.value, 11.0);
    }

    #[test]
    fn dec_tiger_h1_optimum_is_both_listen() {
        let m = make_dec_tiger(1, 0.85).unwrap();
        let res = brute_force_optimal(&m, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!((res.value + 2.0).abs() < 1e-12);
        let jh = JointHistory::empty(2);
        assert_eq!(res.tree.joint_action(&jh).unwrap(), vec![DT_LISTEN, DT_LISTEN]);
    }

    #[test]
    fn dec_tiger_h2_optimum_matches_reevaluation() {
        let m = make_dec_tiger(2, 0.85).unwrap();
        let res = brute_force_optimal(&m, 2, DEFAULT_ENUMERATION_CAP).unwrap();
        let v = evaluate_joint_policy(&m, &res.tree).unwrap();
        assert!((v - res.value).abs() < 1e-12);
        // greedy over root Q-values recovers V* exactly
        let best_q = res.root_q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best_q, res.value);
    }

    #[test]
    fn cap_exceeded_is_loud() {
        let m = make_dec_tiger(3, 0.85).unwrap();
        let err = brute_force_optimal(&m, 3, 100).unwrap_err();
        match err {
            CoreError::Intractable { cardinality, cap } => {
                assert_eq!(cap, 100);
                // 3^7 per agent, squared
                assert_eq!(cardinality, (2187u64 * 2187).to_string());
            }
            other => panic!("unexpected error {other}"),
        }
    }
}
