//! SGD and Adam over a parameter store.

use std::collections::HashMap;

use crate::params::{ParamId, ParamStore};
use crate::tape::Gradients;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerKind {
    Sgd,
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl OptimizerKind {
    pub fn adam_default() -> Self {
        OptimizerKind::Adam { beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

#[derive(Debug, Clone)]
pub struct Optimizer {
    pub kind: OptimizerKind,
    pub lr: f64,
    step_count: u64,
    m: HashMap<ParamId, Tensor>,
    v: HashMap<ParamId, Tensor>,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lr: f64) -> Self {
        Self {
            kind,
            lr,
            step_count: 0,
            m: HashMap::new(),
            v: HashMap::new(),
        }
    }

    pub fn sgd(lr: f64) -> Self {
        Self::new(OptimizerKind::Sgd, lr)
    }

    pub fn adam(lr: f64) -> Self {
        Self::new(OptimizerKind::adam_default(), lr)
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Gradient-descent step on every parameter with a recorded gradient.
    pub fn step(&mut self, store: &mut ParamStore, grads: &Gradients) {
        self.step_count += 1;
        let t = self.step_count;
        for (pid, g) in grads.params() {
            let theta = store.get_mut(pid);
            match self.kind {
                OptimizerKind::Sgd => {
                    for (w, gi) in theta.data.iter_mut().zip(&g.data) {
                        *w -= self.lr * gi;
                    }
                }
                OptimizerKind::Adam { beta1, beta2, eps } => {
                    let m = self
                        .m
                        .entry(pid)
                        .or_insert_with(|| Tensor::zeros(theta.shape.clone()));
                    let v = self
                        .v
                        .entry(pid)
                        .or_insert_with(|| Tensor::zeros(theta.shape.clone()));
                    let bc1 = 1.0 - beta1.powi(t as i32);
                    let bc2 = 1.0 - beta2.powi(t as i32);
                    for i in 0..theta.data.len() {
                        let gi = g.data[i];
                        m.data[i] = beta1 * m.data[i] + (1.0 - beta1) * gi;
                        v.data[i] = beta2 * v.data[i] + (1.0 - beta2) * gi * gi;
                        let m_hat = m.data[i] / bc1;
                        let v_hat = v.data[i] / bc2;
                        theta.data[i] -= self.lr * m_hat / (v_hat.sqrt() + eps);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tape::Tape;

    fn quadratic_grads(store: &ParamStore, pid: ParamId) -> Gradients {
        let mut tape = Tape::new(store);
        let w = tape.param(pid);
        let sq = tape.square(w);
        let loss = tape.sum(sq);
        tape.backward(loss).unwrap()
    }

    #[test]
    fn sgd_descends_a_quadratic() {
        let mut store = ParamStore::new();
        let pid = store.add("w", Tensor::vector(vec![1.0, -2.0]));
        let mut opt = Optimizer::sgd(0.25);
        let g = quadratic_grads(&store, pid);
        opt.step(&mut store, &g);
        assert_eq!(store.get(pid).data, vec![0.5, -1.0]);
        assert_eq!(opt.step_count(), 1);
    }

    #[test]
    fn adam_with_zero_lr_is_bit_identical() {
        let mut store = ParamStore::new();
        let pid = store.add("w", Tensor::vector(vec![0.3, -1.7, 2.9]));
        let before = store.get(pid).data.clone();
        let mut opt = Optimizer::adam(0.0);
        for _ in 0..5 {
            let g = quadratic_grads(&store, pid);
            opt.step(&mut store, &g);
        }
        let after = &store.get(pid).data;
        for (a, b) in before.iter().zip(after) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn adam_moves_toward_minimum() {
        let mut store = ParamStore::new();
        let pid = store.add("w", Tensor::vector(vec![5.0]));
        let mut opt = Optimizer::adam(0.1);
        for _ in 0..200 {
            let g = quadratic_grads(&store, pid);
            opt.step(&mut store, &g);
        }
        assert!(store.get(pid).data[0].abs() < 1.0);
    }
}
