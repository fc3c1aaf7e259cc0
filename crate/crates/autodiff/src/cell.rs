//! A single-gate recurrent cell for history abstraction.
//!
//! `z = sigmoid(Wz [x; h] + bz)`, `c = tanh(Wc [x; h] + bc)`,
//! `h' = (1 - z) * h + z * c`. The initial hidden state is the zero vector.

use rand::Rng;

use crate::layers::Linear;
use crate::params::{ParamId, ParamStore};
use crate::tape::{NodeId, Tape};
use crate::tensor::Tensor;

#[derive(Debug, Clone)]
pub struct RecurrentCell {
    pub gate: Linear,
    pub candidate: Linear,
    pub input_dim: usize,
    pub hidden_dim: usize,
}

impl RecurrentCell {
    pub fn new(
        store: &mut ParamStore,
        name: &str,
        input_dim: usize,
        hidden_dim: usize,
        rng: &mut impl Rng,
    ) -> Self {
        let gate = Linear::new(store, &format!("{name}.z"), input_dim + hidden_dim, hidden_dim, rng);
        let candidate =
            Linear::new(store, &format!("{name}.c"), input_dim + hidden_dim, hidden_dim, rng);
        Self { gate, candidate, input_dim, hidden_dim }
    }

    pub fn initial_hidden(&self, tape: &mut Tape) -> NodeId {
        tape.input(Tensor::zeros(vec![self.hidden_dim]))
    }

    pub fn forward(&self, tape: &mut Tape, hidden: NodeId, x: NodeId) -> NodeId {
        let xh = tape.concat(x, hidden);
        let z_pre = self.gate.forward(tape, xh);
        let z = tape.sigmoid(z_pre);
        let c_pre = self.candidate.forward(tape, xh);
        let c = tape.tanh(c_pre);
        let one_minus_z = {
            let neg = tape.neg(z);
            tape.add_const(neg, 1.0)
        };
        let keep = tape.mul(one_minus_z, hidden);
        let write = tape.mul(z, c);
        tape.add(keep, write)
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        let mut ids = self.gate.param_ids();
        ids.extend(self.candidate.param_ids());
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    /// A length-1 unroll from the zero hidden state equals the dense
    /// expression z * tanh(Wc [x; 0] + bc) with z = sigmoid(Wz [x; 0] + bz).
    #[test]
    fn unroll_one_equals_dense_step() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mut store = ParamStore::new();
        let cell = RecurrentCell::new(&mut store, "cell", 3, 4, &mut rng);
        let x_val = Tensor::vector(vec![0.5, -1.0, 2.0]);

        let mut tape = Tape::new(&store);
        let h0 = cell.initial_hidden(&mut tape);
        let x = tape.input(x_val.clone());
        let h1 = cell.forward(&mut tape, h0, x);
        let via_cell = tape.value(h1).data.clone();

        let mut tape2 = Tape::new(&store);
        let x = tape2.input(x_val);
        let zeros = tape2.input(Tensor::zeros(vec![4]));
        let xh = tape2.concat(x, zeros);
        let z_pre = cell.gate.forward(&mut tape2, xh);
        let z = tape2.sigmoid(z_pre);
        let c_pre = cell.candidate.forward(&mut tape2, xh);
        let c = tape2.tanh(c_pre);
        let dense = tape2.mul(z, c);
        let via_dense = tape2.value(dense).data.clone();

        for (a, b) in via_cell.iter().zip(via_dense) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
