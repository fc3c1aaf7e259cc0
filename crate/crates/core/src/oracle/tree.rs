//! Explicit deterministic joint policies keyed by local histories.

use std::collections::HashMap;

use crate::error::CoreError;
use crate::history::{JointHistory, LocalHistory};

/// A deterministic joint policy in explicit form: one action per local
/// action-observation history of length < H, per agent. Lookups at histories
/// missing from the map surface as [`CoreError::PolicyUndefined`], which the
/// evaluator reports for reachable histories.
#[derive(Debug, Clone, Default)]
pub struct PolicyTree {
    pub per_agent: Vec<HashMap<LocalHistory, usize>>,
}

impl PolicyTree {
    pub fn new(per_agent: Vec<HashMap<LocalHistory, usize>>) -> Self {
        Self { per_agent }
    }

    pub fn num_agents(&self) -> usize {
        self.per_agent.len()
    }

    pub fn action(&self, agent: usize, h: &LocalHistory) -> Result<usize, CoreError> {
        self.per_agent[agent]
            .get(h)
            .copied()
            .ok_or_else(|| CoreError::PolicyUndefined(format!("agent {agent} at {h}")))
    }

    pub fn joint_action(&self, jh: &JointHistory) -> Result<Vec<usize>, CoreError> {
        (0..self.num_agents())
            .map(|i| self.action(i, jh.agent(i)))
            .collect()
    }

    /// Total number of stored decisions across agents.
    pub fn size(&self) -> usize {
        self.per_agent.iter().map(HashMap::len).sum()
    }
}
