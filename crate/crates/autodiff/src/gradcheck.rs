//! Finite-difference verification of tape gradients.

use crate::params::ParamStore;
use crate::tape::{NodeId, Tape};
use crate::AdError;

/// Relative error with a unit floor, so near-zero gradient pairs are compared
/// absolutely instead of blowing up.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Compare the tape gradient of a scalar-valued builder against central
/// finite differences at step `eps`, coordinate by coordinate over every
/// parameter. Returns the max relative error.
///
/// The builder must be a pure function of the store contents.
pub fn grad_check<F>(store: &ParamStore, build: F, eps: f64) -> Result<f64, AdError>
where
    F: Fn(&ParamStore, &mut Tape) -> NodeId,
{
    let analytic: Vec<(usize, Vec<f64>)> = {
        let mut tape = Tape::new(store);
        let loss = build(store, &mut tape);
        if !tape.value(loss).all_finite() {
            return Err(AdError::NonFinite("gradcheck forward value"));
        }
        let grads = tape.backward(loss)?;
        store
            .ids()
            .map(|pid| {
                let g = grads
                    .param(pid)
                    .map(|t| t.data.clone())
                    .unwrap_or_else(|| vec![0.0; store.get(pid).len()]);
                (pid.0, g)
            })
            .collect()
    };

    let eval = |s: &ParamStore| -> Result<f64, AdError> {
        let mut tape = Tape::new(s);
        let loss = build(s, &mut tape);
        let v = tape.value(loss).item();
        if !v.is_finite() {
            return Err(AdError::NonFinite("gradcheck perturbed value"));
        }
        Ok(v)
    };

    let mut worst: f64 = 0.0;
    let mut perturbed = store.clone();
    for (pid_idx, g) in &analytic {
        let pid = crate::params::ParamId(*pid_idx);
        for k in 0..g.len() {
            let orig = perturbed.get(pid).data[k];
            perturbed.get_mut(pid).data[k] = orig + eps;
            let up = eval(&perturbed)?;
            perturbed.get_mut(pid).data[k] = orig - eps;
            let down = eval(&perturbed)?;
            perturbed.get_mut(pid).data[k] = orig;
            let numeric = (up - down) / (2.0 * eps);
            if !numeric.is_finite() {
                return Err(AdError::NonFinite("finite difference"));
            }
            worst = worst.max(rel_err(g[k], numeric));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor;

    /// Central differences are exact for linear functions up to rounding.
    #[test]
    fn linear_function_is_machine_precision() {
        let mut store = ParamStore::new();
        let w = store.add("w", Tensor::vector(vec![1.5, -2.0, 0.25]));
        let err = grad_check(
            &store,
            |_, tape| {
                let wn = tape.param(w);
                let coef = tape.input(Tensor::vector(vec![3.0, -1.0, 2.0]));
                let prod = tape.mul(wn, coef);
                tape.sum(prod)
            },
            1e-5,
        )
        .unwrap();
        assert!(err < 1e-9, "err = {err}");
    }

    #[test]
    fn non_finite_is_reported() {
        let mut store = ParamStore::new();
        let w = store.add("w", Tensor::scalar(-1.0));
        let res = grad_check(
            &store,
            |_, tape| {
                let wn = tape.param(w);
                tape.ln(wn)
            },
            1e-5,
        );
        assert!(matches!(res, Err(AdError::NonFinite(_))));
    }
}
