//! Policy-space counting with exact big-integer arithmetic.

use num_bigint::BigUint;

use crate::error::CoreError;

/// Exponents past this bound would produce numbers too large to materialize.
const MAX_EXPONENT: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyCounts {
    /// Deterministic observation-history policies for one agent:
    /// `|A| ^ ((|O|^H - 1) / (|O| - 1))`.
    pub per_agent: BigUint,
    /// Per-agent count raised to the number of agents.
    pub decentralized: BigUint,
    /// Centralized policies over joint observation histories:
    /// `(|A|^n) ^ ((|O^n|^H - 1) / (|O^n| - 1))`.
    pub centralized: BigUint,
}

/// Number of observation histories of length < H (the geometric sum, which
/// also covers `num_obs == 1`).
pub fn obs_history_count(num_obs: u64, horizon: u32) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut level = BigUint::from(1u32);
    for _ in 0..horizon {
        total += &level;
        level *= num_obs;
    }
    total
}

/// Count deterministic policies for `n_agents` symmetric agents with
/// `n_actions` actions and `n_obs` observations each, horizon `horizon`.
pub fn count_policies(
    n_actions: u64,
    n_obs: u64,
    horizon: u32,
    n_agents: u32,
) -> Result<PolicyCounts, CoreError> {
    if n_actions == 0 || n_obs == 0 || horizon == 0 || n_agents == 0 {
        return Err(CoreError::BadParameter("all counting arguments must be >= 1".into()));
    }
    let per_agent_exp = obs_history_count(n_obs, horizon);
    let dec_exp = &per_agent_exp * n_agents;
    let joint_obs = BigUint::from(n_obs).pow(n_agents);
    let cent_hist = obs_history_count_big(&joint_obs, horizon);
    let cent_exp = &cent_hist * n_agents;

    let per_agent = pow_checked(n_actions, &per_agent_exp)?;
    let decentralized = pow_checked(n_actions, &dec_exp)?;
    let centralized = pow_checked(n_actions, &cent_exp)?;
    Ok(PolicyCounts {
        per_agent,
        decentralized,
        centralized,
    })
}

fn obs_history_count_big(num_obs: &BigUint, horizon: u32) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut level = BigUint::from(1u32);
    for _ in 0..horizon {
        total += &level;
        level *= num_obs;
    }
    total
}

fn pow_checked(base: u64, exp: &BigUint) -> Result<BigUint, CoreError> {
    let exp_u64 = u64::try_from(exp).map_err(|_| too_large(exp))?;
    if exp_u64 > MAX_EXPONENT {
        return Err(too_large(exp));
    }
    Ok(BigUint::from(base).pow(exp_u64 as u32))
}

fn too_large(exp: &BigUint) -> CoreError {
    CoreError::BadParameter(format!(
        "policy count exponent {exp} exceeds the materialization bound {MAX_EXPONENT}"
    ))
}
