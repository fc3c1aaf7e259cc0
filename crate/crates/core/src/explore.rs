//! Shared exploration primitives.

use crate::error::CoreError;
use crate::rng::Rng;
use rand::Rng as _;

/// Argmax with ties broken by lowest index, for reproducibility across runs.
pub fn argmax_tie_low(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Epsilon-greedy over an action-value row: with probability `1 - eps` the
/// greedy action (lowest-index tie-break), else uniform over all actions.
/// One uniform draw decides the branch, then one more picks the random action.
pub fn epsilon_greedy(q_row: &[f64], eps: f64, rng: &mut Rng) -> Result<usize, CoreError> {
    if q_row.is_empty() {
        return Err(CoreError::EmptyRow);
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(CoreError::BadEpsilon(eps));
    }
    let u: f64 = rng.gen();
    if u < eps {
        Ok(rng.gen_range(0..q_row.len()))
    } else {
        Ok(argmax_tie_low(q_row))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngStream, STREAM_EXPLORE};

    #[test]
    fn pure_argmax_and_tie_break() {
        let mut rng = RngStream::new(0).split(STREAM_EXPLORE);
        assert_eq!(epsilon_greedy(&[0.0, 3.0, 1.0], 0.0, &mut rng).unwrap(), 1);
        assert_eq!(epsilon_greedy(&[2.0, 2.0, 0.0], 0.0, &mut rng).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = RngStream::new(0).split(STREAM_EXPLORE);
        assert!(epsilon_greedy(&[], 0.5, &mut rng).is_err());
        assert!(epsilon_greedy(&[1.0], 1.5, &mut rng).is_err());
        assert!(epsilon_greedy(&[1.0], -0.1, &mut rng).is_err());
    }

    /// With eps = 1 the draw is uniform: chi-squared test at 10^4 draws,
    /// df = 2, critical value 13.82 (p = 0.001).
    #[test]
    fn full_exploration_is_uniform() {
        let mut rng = RngStream::new(11).split(STREAM_EXPLORE);
        let q = [0.0, 3.0, 1.0];
        let n = 10_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[epsilon_greedy(&q, 1.0, &mut rng).unwrap()] += 1;
        }
        let expected = n as f64 / 3.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 13.82, "chi2 = {chi2}, counts = {counts:?}");
    }
}
