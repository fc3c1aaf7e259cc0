//! Finite-difference verification of every architecture the learners use.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use marl_autodiff::hypernet::HypernetSpec;
use marl_autodiff::layers::Activation;
use marl_autodiff::{grad_check, Hypernet, Mlp, ParamStore, RecurrentCell, Tape, Tensor};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[test]
fn two_layer_net_grad_matches_finite_differences() {
    let mut r = rng(10);
    let mut store = ParamStore::new();
    let net = Mlp::new(&mut store, "net", &[4, 8, 1], Activation::Tanh, &mut r);
    let x: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
    let err = grad_check(
        &store,
        move |_, tape| {
            let xin = tape.input(Tensor::vector(x.clone()));
            let out = net.forward(tape, xin);
            tape.sum(out)
        },
        1e-5,
    )
    .unwrap();
    assert!(err < 1e-6, "relative error {err}");
}

#[test]
fn recurrent_cell_unrolled_five_steps() {
    let mut r = rng(11);
    let mut store = ParamStore::new();
    let cell = RecurrentCell::new(&mut store, "cell", 3, 5, &mut r);
    let inputs: Vec<Vec<f64>> = (0..5)
        .map(|_| (0..3).map(|_| r.gen_range(-1.0..1.0)).collect())
        .collect();
    let err = grad_check(
        &store,
        move |_, tape| {
            let mut h = cell.initial_hidden(tape);
            for step in &inputs {
                let x = tape.input(Tensor::vector(step.clone()));
                h = cell.forward(tape, h, x);
            }
            let sq = tape.square(h);
            tape.sum(sq)
        },
        1e-5,
    )
    .unwrap();
    assert!(err < 1e-5, "relative error {err}");
}

/// A monotone mixing layer whose weights come from a hypernetwork, end to
/// end through the absolute-value constraint.
#[test]
fn hypernet_mixing_layer_end_to_end() {
    let mut r = rng(12);
    let mut store = ParamStore::new();
    let hn1 = Hypernet::new(
        &mut store,
        "hn1",
        HypernetSpec { in_dim: 3, target_rows: 4, target_cols: 2 },
        &mut r,
    );
    let hn2 = Hypernet::new(
        &mut store,
        "hn2",
        HypernetSpec { in_dim: 3, target_rows: 1, target_cols: 4 },
        &mut r,
    );
    let state: Vec<f64> = (0..3).map(|_| r.gen_range(-1.0..1.0)).collect();
    let qs: Vec<f64> = (0..2).map(|_| r.gen_range(-1.0..1.0)).collect();
    let err = grad_check(
        &store,
        move |_, tape| {
            let s = tape.input(Tensor::vector(state.clone()));
            let q = tape.input(Tensor::vector(qs.clone()));
            let (w1, b1) = hn1.forward(tape, s);
            let h = tape.matvec(w1, q);
            let h = tape.add(h, b1);
            let h = tape.elu(h);
            let (w2, b2) = hn2.forward(tape, s);
            let out = tape.matvec(w2, h);
            let out = tape.add(out, b2);
            tape.sum(out)
        },
        1e-5,
    )
    .unwrap();
    assert!(err < 1e-5, "relative error {err}");
}

/// Every primitive, checked at 100 random points each.
#[test]
fn primitives_pass_gradcheck_at_random_points() {
    let mut r = rng(13);
    for trial in 0..100 {
        let n = 4;
        let mut store = ParamStore::new();
        let a = store.add(
            "a",
            Tensor::vector((0..n).map(|_| r.gen_range(-2.0..2.0)).collect()),
        );
        let b = store.add(
            "b",
            Tensor::vector((0..n).map(|_| r.gen_range(-2.0..2.0)).collect()),
        );
        let w = store.add(
            "w",
            Tensor::matrix(2, n, (0..2 * n).map(|_| r.gen_range(-1.0..1.0)).collect()),
        );
        let which = trial % 14;
        let err = grad_check(
            &store,
            move |_, tape| {
                let an = tape.param(a);
                let bn = tape.param(b);
                let wn = tape.param(w);
                let mixed = match which {
                    0 => tape.add(an, bn),
                    1 => tape.sub(an, bn),
                    2 => tape.mul(an, bn),
                    3 => tape.matvec(wn, an),
                    4 => tape.concat(an, bn),
                    5 => tape.gather(an, vec![1, 3, 1]),
                    6 => tape.square(an),
                    7 => tape.abs(an),
                    8 => tape.tanh(an),
                    9 => tape.sigmoid(an),
                    10 => tape.elu(an),
                    11 => {
                        let sm = tape.softmax(an);
                        // exercise ln through a strictly positive value
                        tape.ln(sm)
                    }
                    12 => tape.min2(an, bn),
                    _ => {
                        let e = tape.scale(an, 0.25);
                        tape.exp(e)
                    }
                };
                let sq = tape.square(mixed);
                tape.sum(sq)
            },
            1e-6,
        )
        .unwrap();
        assert!(err < 1e-5, "primitive {which} trial {trial}: error {err}");
    }
}

/// Softmax + clip + max_reduce away from kinks.
#[test]
fn nonsmooth_primitives_away_from_kinks() {
    let mut r = rng(14);
    for _ in 0..100 {
        let mut store = ParamStore::new();
        // keep coordinates away from the clip boundary and ties
        let vals: Vec<f64> = (0..4)
            .map(|_| {
                let v: f64 = r.gen_range(-2.0..2.0);
                if (v.abs() - 1.0).abs() < 0.05 {
                    v + 0.1
                } else {
                    v
                }
            })
            .collect();
        let a = store.add("a", Tensor::vector(vals));
        let err = grad_check(
            &store,
            move |_, tape| {
                let an = tape.param(a);
                let c = tape.clip(an, -1.0, 1.0);
                let m = tape.max_reduce(c);
                tape.square(m)
            },
            1e-6,
        )
        .unwrap();
        assert!(err < 1e-5, "error {err}");
    }
}
