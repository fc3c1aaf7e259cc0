//! Dense layers and small MLPs.

use rand::Rng;

use crate::params::{ParamId, ParamStore};
use crate::tape::{NodeId, Tape};

/// `y = W x + b`.
#[derive(Debug, Clone)]
pub struct Linear {
    pub w: ParamId,
    pub b: ParamId,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Linear {
    pub fn new(
        store: &mut ParamStore,
        name: &str,
        in_dim: usize,
        out_dim: usize,
        rng: &mut impl Rng,
    ) -> Self {
        let w = store.add_xavier(format!("{name}.w"), out_dim, in_dim, rng);
        let b = store.add_zeros(format!("{name}.b"), vec![out_dim]);
        Self { w, b, in_dim, out_dim }
    }

    pub fn forward(&self, tape: &mut Tape, x: NodeId) -> NodeId {
        let w = tape.param(self.w);
        let b = tape.param(self.b);
        let wx = tape.matvec(w, x);
        tape.add(wx, b)
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        vec![self.w, self.b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Elu,
    None,
}

/// A feedforward stack with a fixed hidden activation and linear output.
#[derive(Debug, Clone)]
pub struct Mlp {
    pub layers: Vec<Linear>,
    pub hidden_activation: Activation,
}

impl Mlp {
    /// `dims` = [in, hidden..., out].
    pub fn new(
        store: &mut ParamStore,
        name: &str,
        dims: &[usize],
        hidden_activation: Activation,
        rng: &mut impl Rng,
    ) -> Self {
        assert!(dims.len() >= 2);
        let layers = dims
            .windows(2)
            .enumerate()
            .map(|(i, w)| Linear::new(store, &format!("{name}.{i}"), w[0], w[1], rng))
            .collect();
        Self { layers, hidden_activation }
    }

    pub fn forward(&self, tape: &mut Tape, mut x: NodeId) -> NodeId {
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            x = layer.forward(tape, x);
            if i < last {
                x = match self.hidden_activation {
                    Activation::Tanh => tape.tanh(x),
                    Activation::Elu => tape.elu(x),
                    Activation::None => x,
                };
            }
        }
        x
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        self.layers.iter().flat_map(Linear::param_ids).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn linear_zero_bias_matches_matvec() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let mut store = ParamStore::new();
        let lin = Linear::new(&mut store, "l", 3, 2, &mut rng);
        let mut tape = Tape::new(&store);
        let x = tape.input(Tensor::vector(vec![1.0, 2.0, -1.0]));
        let y = lin.forward(&mut tape, x);
        let w = store.get(lin.w);
        let expect: Vec<f64> = (0..2)
            .map(|i| (0..3).map(|j| w.at(i, j) * [1.0, 2.0, -1.0][j]).sum())
            .collect();
        for (a, b) in tape.value(y).data.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
