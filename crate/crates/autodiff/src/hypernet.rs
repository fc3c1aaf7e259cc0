//! Hypernetworks: linear heads that generate the weights and biases of a
//! target layer from a conditioning input. Generated weight tensors pass
//! through an absolute-value constraint so downstream mixing stays monotone;
//! biases are unconstrained.

use rand::Rng;

use crate::layers::Linear;
use crate::params::{ParamId, ParamStore};
use crate::tape::{NodeId, Tape};

/// Declares the shape of one generated layer.
#[derive(Debug, Clone, Copy)]
pub struct HypernetSpec {
    pub in_dim: usize,
    pub target_rows: usize,
    pub target_cols: usize,
}

/// Generates one `[rows, cols]` weight matrix (non-negative) and one `[rows]`
/// bias vector from the conditioning input.
#[derive(Debug, Clone)]
pub struct Hypernet {
    pub weight_head: Linear,
    pub bias_head: Linear,
    pub spec: HypernetSpec,
}

impl Hypernet {
    pub fn new(store: &mut ParamStore, name: &str, spec: HypernetSpec, rng: &mut impl Rng) -> Self {
        let weight_head = Linear::new(
            store,
            &format!("{name}.w"),
            spec.in_dim,
            spec.target_rows * spec.target_cols,
            rng,
        );
        let bias_head = Linear::new(store, &format!("{name}.b"), spec.in_dim, spec.target_rows, rng);
        Self { weight_head, bias_head, spec }
    }

    /// Returns `(weights [rows, cols], bias [rows])` for the target layer.
    pub fn forward(&self, tape: &mut Tape, cond: NodeId) -> (NodeId, NodeId) {
        let raw_w = self.weight_head.forward(tape, cond);
        let pos_w = positive_weights(tape, raw_w);
        let w = tape.reshape(pos_w, vec![self.spec.target_rows, self.spec.target_cols]);
        let b = self.bias_head.forward(tape, cond);
        (w, b)
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        let mut ids = self.weight_head.param_ids();
        ids.extend(self.bias_head.param_ids());
        ids
    }
}

/// Non-negativity constraint on raw parameters: elementwise absolute value.
/// Gradients flow with a sign(raw) factor.
pub fn positive_weights(tape: &mut Tape, raw: NodeId) -> NodeId {
    tape.abs(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn positive_weights_examples() {
        let store = ParamStore::new();
        let mut tape = Tape::new(&store);
        let raw = tape.input(Tensor::vector(vec![-1.0, 2.0, 0.0]));
        let pos = positive_weights(&mut tape, raw);
        assert_eq!(tape.value(pos).data, vec![1.0, 2.0, 0.0]);
    }

    #[test]
    fn output_shape_matches_spec() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut store = ParamStore::new();
        let spec = HypernetSpec { in_dim: 3, target_rows: 4, target_cols: 2 };
        let hn = Hypernet::new(&mut store, "hn", spec, &mut rng);
        let mut tape = Tape::new(&store);
        let cond = tape.input(Tensor::vector(vec![0.1, 0.2, 0.3]));
        let (w, b) = hn.forward(&mut tape, cond);
        assert_eq!(tape.value(w).shape, vec![4, 2]);
        assert_eq!(tape.value(b).shape, vec![4]);
        assert!(tape.value(w).data.iter().all(|&x| x >= 0.0));
    }

    /// With a zero conditioning input and a zeroed weight head, the generated
    /// weights reduce to |bias init| of the head.
    #[test]
    fn zero_state_reduces_to_abs_bias() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut store = ParamStore::new();
        let spec = HypernetSpec { in_dim: 2, target_rows: 2, target_cols: 2 };
        let hn = Hypernet::new(&mut store, "hn", spec, &mut rng);
        store.get_mut(hn.weight_head.w).data.fill(0.0);
        let bias = vec![-0.5, 0.25, 0.0, 1.5];
        store.get_mut(hn.weight_head.b).data.copy_from_slice(&bias);
        let mut tape = Tape::new(&store);
        let cond = tape.input(Tensor::zeros(vec![2]));
        let (w, _) = hn.forward(&mut tape, cond);
        let expect: Vec<f64> = bias.iter().map(|x| x.abs()).collect();
        assert_eq!(tape.value(w).data, expect);
    }
}
