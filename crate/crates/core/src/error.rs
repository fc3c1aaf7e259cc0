use thiserror::Error;

/// Errors surfaced by model construction, rollouts, and the oracles.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("index {index} out of range for {what} (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("history has length {len}, horizon is {horizon}")]
    HorizonExceeded { len: usize, horizon: usize },

    #[error("probability vector for {what} sums to {sum}, expected 1")]
    NotAProbability { what: &'static str, sum: f64 },

    #[error("inconsistent history: observation has zero probability under the model")]
    InconsistentHistory,

    #[error("policy undefined at a reachable history: {0}")]
    PolicyUndefined(String),

    #[error("policy space too large to enumerate: {cardinality} joint policies exceed cap {cap}")]
    Intractable { cardinality: String, cap: u64 },

    #[error("model is not fully observable; {0} requires an MMDP")]
    NotFullyObservable(&'static str),

    #[error("epsilon {0} outside [0, 1]")]
    BadEpsilon(f64),

    #[error("empty action-value row")]
    EmptyRow,

    #[error("invalid environment parameter: {0}")]
    BadParameter(String),
}
