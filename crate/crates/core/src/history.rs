//! Local and joint action-observation histories.
//!
//! Histories are value-semantic and hashable so tabular learners can use them
//! as exact-match keys. Histories start empty at t = 0; the timestep of a
//! history is its length.

use std::fmt;

/// One agent's alternating action-observation sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LocalHistory {
    entries: Vec<(usize, usize)>,
}

impl LocalHistory {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(usize, usize)>) -> Self {
        Self { entries }
    }

    /// Timestep; equals the number of (action, observation) pairs.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Value-semantic append: returns the extended history, leaving `self`
    /// unmodified. Index validation lives on the model, which knows the
    /// action and observation set sizes.
    pub fn appended(&self, action: usize, obs: usize) -> LocalHistory {
        let mut entries = self.entries.clone();
        entries.push((action, obs));
        Self { entries }
    }

    /// The sequence of observations only (used by observation-history policy
    /// trees in the oracle).
    pub fn observations(&self) -> Vec<usize> {
        self.entries.iter().map(|&(_, o)| o).collect()
    }

    /// Canonical text encoding: comma-separated `action:observation` pairs.
    pub fn encode(&self) -> String {
        self.entries
            .iter()
            .map(|(a, o)| format!("{a}:{o}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn decode(s: &str) -> Option<Self> {
        if s.is_empty() {
            return Some(Self::empty());
        }
        let mut entries = Vec::new();
        for pair in s.split(',') {
            let (a, o) = pair.split_once(':')?;
            entries.push((a.parse().ok()?, o.parse().ok()?));
        }
        Some(Self { entries })
    }
}

impl fmt::Display for LocalHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.encode())
    }
}

/// All agents' local histories at the same timestep.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct JointHistory {
    per_agent: Vec<LocalHistory>,
}

impl JointHistory {
    pub fn empty(num_agents: usize) -> Self {
        Self {
            per_agent: vec![LocalHistory::empty(); num_agents],
        }
    }

    /// All component lengths must be equal; panics otherwise.
    pub fn new(per_agent: Vec<LocalHistory>) -> Self {
        if let Some(first) = per_agent.first() {
            assert!(
                per_agent.iter().all(|h| h.len() == first.len()),
                "joint history components must have equal length"
            );
        }
        Self { per_agent }
    }

    pub fn num_agents(&self) -> usize {
        self.per_agent.len()
    }

    /// Shared timestep of all components.
    pub fn len(&self) -> usize {
        self.per_agent.first().map_or(0, LocalHistory::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn agent(&self, i: usize) -> &LocalHistory {
        &self.per_agent[i]
    }

    pub fn per_agent(&self) -> &[LocalHistory] {
        &self.per_agent
    }

    /// Append one joint action and joint observation.
    pub fn appended(&self, joint_action: &[usize], joint_obs: &[usize]) -> JointHistory {
        debug_assert_eq!(joint_action.len(), self.per_agent.len());
        debug_assert_eq!(joint_obs.len(), self.per_agent.len());
        Self {
            per_agent: self
                .per_agent
                .iter()
                .zip(joint_action.iter().zip(joint_obs))
                .map(|(h, (&a, &o))| h.appended(a, o))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_is_value_semantic() {
        let h = LocalHistory::empty();
        let h1 = h.appended(1, 0);
        assert!(h.is_empty());
        assert_eq!(h1.entries(), &[(1, 0)]);
        let h2 = h1.appended(2, 1);
        assert_eq!(h1.entries(), &[(1, 0)]);
        assert_eq!(h2.entries(), &[(1, 0), (2, 1)]);
    }

    #[test]
    fn encode_decode_round_trip() {
        let h = LocalHistory::from_entries(vec![(1, 0), (2, 1), (0, 0)]);
        assert_eq!(h.encode(), "1:0,2:1,0:0");
        assert_eq!(LocalHistory::decode(&h.encode()), Some(h));
        assert_eq!(LocalHistory::decode(""), Some(LocalHistory::empty()));
    }

    #[test]
    #[should_panic(expected = "equal length")]
    fn joint_history_rejects_ragged_components() {
        JointHistory::new(vec![
            LocalHistory::empty(),
            LocalHistory::from_entries(vec![(0, 0)]),
        ]);
    }
}
