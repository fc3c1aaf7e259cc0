//! The recording tape: primitive ops and reverse-mode backward.

use crate::params::{ParamId, ParamStore};
use crate::tensor::Tensor;
use crate::AdError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeId(usize);

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    Param(ParamId),
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Scale(NodeId, f64),
    AddConst(NodeId, f64),
    MatVec(NodeId, NodeId),
    Concat(NodeId, NodeId),
    Gather(NodeId, Vec<usize>),
    Sum(NodeId),
    Square(NodeId),
    Abs(NodeId),
    Tanh(NodeId),
    Sigmoid(NodeId),
    Elu(NodeId),
    Exp(NodeId),
    Ln(NodeId),
    Softmax(NodeId),
    MaxReduce(NodeId),
    Min2(NodeId, NodeId),
    Max2(NodeId, NodeId),
    Clip(NodeId, f64, f64),
    Reshape(NodeId),
    Detach(NodeId),
}

struct Node {
    value: Tensor,
    op: Op,
}

/// Gradients produced by one backward pass.
#[derive(Debug, Clone)]
pub struct Gradients {
    by_param: Vec<(ParamId, Tensor)>,
    by_node: Vec<Option<Tensor>>,
}

impl Gradients {
    pub fn param(&self, id: ParamId) -> Option<&Tensor> {
        self.by_param.iter().find(|(p, _)| *p == id).map(|(_, t)| t)
    }

    pub fn params(&self) -> impl Iterator<Item = (ParamId, &Tensor)> {
        self.by_param.iter().map(|(p, t)| (*p, t))
    }

    /// Gradient of the loss w.r.t. an arbitrary node (e.g. an input leaf).
    pub fn node(&self, id: NodeId) -> Option<&Tensor> {
        self.by_node[id.0].as_ref()
    }
}

/// A single-use computation tape over one parameter store.
pub struct Tape<'s> {
    store: &'s ParamStore,
    nodes: Vec<Node>,
    param_leaves: Vec<(ParamId, NodeId)>,
}

impl<'s> Tape<'s> {
    pub fn new(store: &'s ParamStore) -> Self {
        Self {
            store,
            nodes: Vec::new(),
            param_leaves: Vec::new(),
        }
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].value
    }

    fn push(&mut self, value: Tensor, op: Op) -> NodeId {
        self.nodes.push(Node { value, op });
        NodeId(self.nodes.len() - 1)
    }

    /// A constant or externally supplied input. Gradients are still tracked
    /// so callers can read input gradients (chain-rule through networks).
    pub fn input(&mut self, value: Tensor) -> NodeId {
        self.push(value, Op::Leaf)
    }

    pub fn scalar(&mut self, v: f64) -> NodeId {
        self.input(Tensor::scalar(v))
    }

    /// Bind a parameter; repeated binds of the same id share one node.
    pub fn param(&mut self, id: ParamId) -> NodeId {
        if let Some(&(_, n)) = self.param_leaves.iter().find(|(p, _)| *p == id) {
            return n;
        }
        let value = self.store.get(id).clone();
        let n = self.push(value, Op::Param(id));
        self.param_leaves.push((id, n));
        n
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.shape, vb.shape, "add shape mismatch");
        let data = va.data.iter().zip(&vb.data).map(|(x, y)| x + y).collect();
        let shape = va.shape.clone();
        self.push(Tensor::new(shape, data), Op::Add(a, b))
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.shape, vb.shape, "sub shape mismatch");
        let data = va.data.iter().zip(&vb.data).map(|(x, y)| x - y).collect();
        let shape = va.shape.clone();
        self.push(Tensor::new(shape, data), Op::Sub(a, b))
    }

    /// Elementwise product.
    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.shape, vb.shape, "mul shape mismatch");
        let data = va.data.iter().zip(&vb.data).map(|(x, y)| x * y).collect();
        let shape = va.shape.clone();
        self.push(Tensor::new(shape, data), Op::Mul(a, b))
    }

    pub fn scale(&mut self, a: NodeId, c: f64) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x * c).collect());
        self.push(t, Op::Scale(a, c))
    }

    pub fn add_const(&mut self, a: NodeId, c: f64) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x + c).collect());
        self.push(t, Op::AddConst(a, c))
    }

    pub fn neg(&mut self, a: NodeId) -> NodeId {
        self.scale(a, -1.0)
    }

    /// `W [m,n] * x [n] -> [m]`; both sides may carry gradients.
    pub fn matvec(&mut self, w: NodeId, x: NodeId) -> NodeId {
        let (vw, vx) = (&self.nodes[w.0].value, &self.nodes[x.0].value);
        assert_eq!(vw.shape.len(), 2, "matvec needs a matrix, got {:?}", vw.shape);
        let (m, n) = (vw.shape[0], vw.shape[1]);
        assert_eq!(vx.len(), n, "matvec shape mismatch: {:?} x {:?}", vw.shape, vx.shape);
        let mut out = vec![0.0; m];
        for i in 0..m {
            let mut acc = 0.0;
            for j in 0..n {
                acc += vw.data[i * n + j] * vx.data[j];
            }
            out[i] = acc;
        }
        self.push(Tensor::vector(out), Op::MatVec(w, x))
    }

    pub fn concat(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        let mut data = va.data.clone();
        data.extend_from_slice(&vb.data);
        self.push(Tensor::vector(data), Op::Concat(a, b))
    }

    /// Pick entries by index; repeated indices accumulate in backward.
    pub fn gather(&mut self, a: NodeId, indices: Vec<usize>) -> NodeId {
        let va = &self.nodes[a.0].value;
        let data: Vec<f64> = indices.iter().map(|&i| va.data[i]).collect();
        self.push(Tensor::vector(data), Op::Gather(a, indices))
    }

    pub fn gather_one(&mut self, a: NodeId, index: usize) -> NodeId {
        self.gather(a, vec![index])
    }

    pub fn sum(&mut self, a: NodeId) -> NodeId {
        let s = self.nodes[a.0].value.data.iter().sum();
        self.push(Tensor::scalar(s), Op::Sum(a))
    }

    pub fn mean(&mut self, a: NodeId) -> NodeId {
        let n = self.nodes[a.0].value.len();
        let s = self.sum(a);
        self.scale(s, 1.0 / n as f64)
    }

    pub fn square(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x * x).collect());
        self.push(t, Op::Square(a))
    }

    pub fn abs(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x.abs()).collect());
        self.push(t, Op::Abs(a))
    }

    pub fn tanh(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x.tanh()).collect());
        self.push(t, Op::Tanh(a))
    }

    pub fn sigmoid(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(
            va.shape.clone(),
            va.data.iter().map(|x| 1.0 / (1.0 + (-x).exp())).collect(),
        );
        self.push(t, Op::Sigmoid(a))
    }

    pub fn elu(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(
            va.shape.clone(),
            va.data.iter().map(|&x| if x > 0.0 { x } else { x.exp() - 1.0 }).collect(),
        );
        self.push(t, Op::Elu(a))
    }

    pub fn exp(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x.exp()).collect());
        self.push(t, Op::Exp(a))
    }

    pub fn ln(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x.ln()).collect());
        self.push(t, Op::Ln(a))
    }

    /// Numerically stable softmax over a vector.
    pub fn softmax(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let max = va.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = va.data.iter().map(|x| (x - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        let t = Tensor::new(va.shape.clone(), exps.into_iter().map(|e| e / z).collect());
        self.push(t, Op::Softmax(a))
    }

    /// Max over all entries; gradient flows to the lowest-index argmax.
    pub fn max_reduce(&mut self, a: NodeId) -> NodeId {
        let va = &self.nodes[a.0].value;
        let m = va.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.push(Tensor::scalar(m), Op::MaxReduce(a))
    }

    /// Elementwise min; on ties the gradient goes to `a`.
    pub fn min2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.shape, vb.shape, "min2 shape mismatch");
        let data = va.data.iter().zip(&vb.data).map(|(x, y)| x.min(*y)).collect();
        let shape = va.shape.clone();
        self.push(Tensor::new(shape, data), Op::Min2(a, b))
    }

    /// Elementwise max; on ties the gradient goes to `a`.
    pub fn max2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.shape, vb.shape, "max2 shape mismatch");
        let data = va.data.iter().zip(&vb.data).map(|(x, y)| x.max(*y)).collect();
        let shape = va.shape.clone();
        self.push(Tensor::new(shape, data), Op::Max2(a, b))
    }

    /// Clamp into `[lo, hi]` with zero gradient strictly outside the range
    /// (no straight-through).
    pub fn clip(&mut self, a: NodeId, lo: f64, hi: f64) -> NodeId {
        let va = &self.nodes[a.0].value;
        let t = Tensor::new(va.shape.clone(), va.data.iter().map(|x| x.clamp(lo, hi)).collect());
        self.push(t, Op::Clip(a, lo, hi))
    }

    pub fn reshape(&mut self, a: NodeId, shape: Vec<usize>) -> NodeId {
        let va = &self.nodes[a.0].value;
        assert_eq!(va.len(), shape.iter().product::<usize>(), "reshape size mismatch");
        let t = Tensor::new(shape, va.data.clone());
        self.push(t, Op::Reshape(a))
    }

    /// Identity on values, zero gradient: cuts the graph.
    pub fn detach(&mut self, a: NodeId) -> NodeId {
        let va = self.nodes[a.0].value.clone();
        self.push(va, Op::Detach(a))
    }

    /// Reverse pass from a scalar loss. Gradients accumulate additively in
    /// reverse creation order (a valid reverse topological order, since ops
    /// only reference earlier nodes).
    pub fn backward(&self, loss: NodeId) -> Result<Gradients, AdError> {
        let loss_t = &self.nodes[loss.0].value;
        if !loss_t.is_scalar() {
            return Err(AdError::NonScalarLoss(loss_t.shape.clone()));
        }
        let mut grads: Vec<Option<Tensor>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(Tensor::scalar(1.0));

        for idx in (0..=loss.0).rev() {
            let Some(g) = grads[idx].clone() else { continue };
            let node = &self.nodes[idx];
            match &node.op {
                Op::Leaf | Op::Param(_) => {}
                Op::Add(a, b) => {
                    acc(&mut grads, *a, &g.data, &g.shape);
                    acc(&mut grads, *b, &g.data, &g.shape);
                }
                Op::Sub(a, b) => {
                    acc(&mut grads, *a, &g.data, &g.shape);
                    let neg: Vec<f64> = g.data.iter().map(|x| -x).collect();
                    acc(&mut grads, *b, &neg, &g.shape);
                }
                Op::Mul(a, b) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&self.nodes[b.0].value.data)
                        .map(|(gi, bi)| gi * bi)
                        .collect();
                    let db: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&self.nodes[a.0].value.data)
                        .map(|(gi, ai)| gi * ai)
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                    acc(&mut grads, *b, &db, &g.shape);
                }
                Op::Scale(a, c) => {
                    let da: Vec<f64> = g.data.iter().map(|gi| gi * c).collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::AddConst(a, _) => acc(&mut grads, *a, &g.data, &g.shape),
                Op::MatVec(w, x) => {
                    let vw = &self.nodes[w.0].value;
                    let vx = &self.nodes[x.0].value;
                    let (m, n) = (vw.shape[0], vw.shape[1]);
                    let mut dw = vec![0.0; m * n];
                    let mut dx = vec![0.0; n];
                    for i in 0..m {
                        let gi = g.data[i];
                        for j in 0..n {
                            dw[i * n + j] = gi * vx.data[j];
                            dx[j] += vw.data[i * n + j] * gi;
                        }
                    }
                    acc(&mut grads, *w, &dw, &vw.shape);
                    acc(&mut grads, *x, &dx, &vx.shape);
                }
                Op::Concat(a, b) => {
                    let na = self.nodes[a.0].value.len();
                    acc(&mut grads, *a, &g.data[..na], &self.nodes[a.0].value.shape);
                    acc(&mut grads, *b, &g.data[na..], &self.nodes[b.0].value.shape);
                }
                Op::Gather(a, indices) => {
                    let va = &self.nodes[a.0].value;
                    let mut da = vec![0.0; va.len()];
                    for (k, &i) in indices.iter().enumerate() {
                        da[i] += g.data[k];
                    }
                    acc(&mut grads, *a, &da, &va.shape);
                }
                Op::Sum(a) => {
                    let va = &self.nodes[a.0].value;
                    let da = vec![g.data[0]; va.len()];
                    acc(&mut grads, *a, &da, &va.shape);
                }
                Op::Square(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&self.nodes[a.0].value.data)
                        .map(|(gi, ai)| gi * 2.0 * ai)
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Abs(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&self.nodes[a.0].value.data)
                        .map(|(gi, ai)| gi * sign(*ai))
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Tanh(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&node.value.data)
                        .map(|(gi, yi)| gi * (1.0 - yi * yi))
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Sigmoid(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&node.value.data)
                        .map(|(gi, yi)| gi * yi * (1.0 - yi))
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Elu(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(self.nodes[a.0].value.data.iter().zip(&node.value.data))
                        .map(|(gi, (xi, yi))| gi * if *xi > 0.0 { 1.0 } else { yi + 1.0 })
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Exp(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&node.value.data)
                        .map(|(gi, yi)| gi * yi)
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Ln(a) => {
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&self.nodes[a.0].value.data)
                        .map(|(gi, ai)| gi / ai)
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::Softmax(a) => {
                    let y = &node.value.data;
                    let dot: f64 = g.data.iter().zip(y).map(|(gi, yi)| gi * yi).sum();
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(y)
                        .map(|(gi, yi)| yi * (gi - dot))
                        .collect();
                    acc(&mut grads, *a, &da, &g.shape);
                }
                Op::MaxReduce(a) => {
                    let va = &self.nodes[a.0].value;
                    let mut best = 0;
                    for (i, &v) in va.data.iter().enumerate().skip(1) {
                        if v > va.data[best] {
                            best = i;
                        }
                    }
                    let mut da = vec![0.0; va.len()];
                    da[best] = g.data[0];
                    acc(&mut grads, *a, &da, &va.shape);
                }
                Op::Min2(a, b) => {
                    let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
                    let mut da = vec![0.0; va.len()];
                    let mut db = vec![0.0; vb.len()];
                    for k in 0..va.len() {
                        if va.data[k] <= vb.data[k] {
                            da[k] = g.data[k];
                        } else {
                            db[k] = g.data[k];
                        }
                    }
                    acc(&mut grads, *a, &da, &va.shape);
                    acc(&mut grads, *b, &db, &vb.shape);
                }
                Op::Max2(a, b) => {
                    let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
                    let mut da = vec![0.0; va.len()];
                    let mut db = vec![0.0; vb.len()];
                    for k in 0..va.len() {
                        if va.data[k] >= vb.data[k] {
                            da[k] = g.data[k];
                        } else {
                            db[k] = g.data[k];
                        }
                    }
                    acc(&mut grads, *a, &da, &va.shape);
                    acc(&mut grads, *b, &db, &vb.shape);
                }
                Op::Clip(a, lo, hi) => {
                    let va = &self.nodes[a.0].value;
                    let da: Vec<f64> = g
                        .data
                        .iter()
                        .zip(&va.data)
                        .map(|(gi, ai)| if *ai >= *lo && *ai <= *hi { *gi } else { 0.0 })
                        .collect();
                    acc(&mut grads, *a, &da, &va.shape);
                }
                Op::Reshape(a) => {
                    let va = &self.nodes[a.0].value;
                    acc(&mut grads, *a, &g.data, &va.shape);
                }
                Op::Detach(_) => {}
            }
        }

        let by_param = self
            .param_leaves
            .iter()
            .map(|&(pid, nid)| {
                let g = grads[nid.0]
                    .clone()
                    .unwrap_or_else(|| Tensor::zeros(self.store.get(pid).shape.clone()));
                (pid, g)
            })
            .collect();
        Ok(Gradients { by_param, by_node: grads })
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn acc(grads: &mut [Option<Tensor>], target: NodeId, delta: &[f64], shape: &[usize]) {
    match &mut grads[target.0] {
        Some(t) => {
            for (g, d) in t.data.iter_mut().zip(delta) {
                *g += d;
            }
        }
        slot @ None => {
            *slot = Some(Tensor::new(shape.to_vec(), delta.to_vec()));
        }
    }
}
