//! Finite-difference checks for every differentiable primitive and a small
//! two-layer network, 20 random instances each.

use numkit::gradcheck::{check, random_tensor, seeded};
use numkit::{Result, Tape, Tensor, Var};
use proptest::prelude::*;

const STEP: f64 = 1e-4;
const TOL: f64 = 1e-4;
const INSTANCES: u64 = 20;

fn run(name: &str, shapes: &[&[usize]], f: impl Fn(&mut Tape, &[Var]) -> Result<Var>) {
    for seed in 0..INSTANCES {
        let mut rng = seeded(seed * 7919 + name.len() as u64);
        let inputs: Vec<Tensor> = shapes.iter().map(|s| random_tensor(s, -2.0, 2.0, &mut rng)).collect();
        let rep = check(&inputs, STEP, &f).unwrap();
        assert!(rep.passes(TOL), "{name} seed {seed}: {rep:?}");
    }
}

// Weighted sum makes every output element matter differently.
fn weighted(tape: &mut Tape, y: Var) -> Result<Var> {
    let shape = tape.shape(y).to_vec();
    let w = tape.constant(Tensor::from_fn(&shape, |i| ((i % 5) as f64 - 1.7) * 0.6));
    let p = tape.mul(y, w)?;
    Ok(tape.sum(p))
}

#[test]
fn matmul() {
    run("matmul", &[&[3, 4], &[4, 2]], |t, v| {
        let y = t.matmul(v[0], v[1])?;
        weighted(t, y)
    });
}

#[test]
fn matmul_nt() {
    run("matmul_nt", &[&[3, 4], &[5, 4]], |t, v| {
        let y = t.matmul_nt(v[0], v[1])?;
        weighted(t, y)
    });
}

#[test]
fn add_sub_mul() {
    run("add", &[&[2, 3], &[2, 3]], |t, v| {
        let y = t.add(v[0], v[1])?;
        weighted(t, y)
    });
    run("sub", &[&[2, 3], &[2, 3]], |t, v| {
        let y = t.sub(v[0], v[1])?;
        weighted(t, y)
    });
    run("mul", &[&[2, 3], &[2, 3]], |t, v| {
        let y = t.mul(v[0], v[1])?;
        weighted(t, y)
    });
}

#[test]
fn add_row_and_scale() {
    run("add_row", &[&[4, 3], &[1, 3]], |t, v| {
        let y = t.add_row(v[0], v[1])?;
        weighted(t, y)
    });
    run("scale", &[&[2, 2]], |t, v| {
        let y = t.scale(v[0], -1.3);
        weighted(t, y)
    });
}

#[test]
fn elementwise_nonlinear() {
    run("tanh", &[&[3, 3]], |t, v| {
        let y = t.tanh(v[0]);
        weighted(t, y)
    });
    run("square", &[&[3, 3]], |t, v| {
        let y = t.square(v[0]);
        weighted(t, y)
    });
}

#[test]
fn reductions() {
    run("sum", &[&[2, 5]], |t, v| {
        let s = t.square(v[0]);
        Ok(t.sum(s))
    });
    run("mean", &[&[2, 5]], |t, v| {
        let s = t.tanh(v[0]);
        Ok(t.mean(s))
    });
}

#[test]
fn softmaxes() {
    run("log_softmax", &[&[4, 5]], |t, v| {
        let y = t.log_softmax(v[0])?;
        weighted(t, y)
    });
    run("softmax", &[&[4, 5]], |t, v| {
        let y = t.softmax(v[0])?;
        weighted(t, y)
    });
}

#[test]
fn narrow() {
    run("narrow_rows", &[&[5, 3]], |t, v| {
        let y = t.narrow(v[0], 0, 1, 3)?;
        weighted(t, y)
    });
    run("narrow_cols", &[&[3, 5]], |t, v| {
        let y = t.narrow(v[0], 1, 2, 2)?;
        weighted(t, y)
    });
}

#[test]
fn rnn_tanh() {
    run("rnn_tanh", &[&[6, 3], &[3, 4], &[4, 4], &[1, 4]], |t, v| {
        let w_rec = t.scale(v[2], 0.5);
        let y = t.rnn_tanh(v[0], v[1], w_rec, v[3])?;
        weighted(t, y)
    });
}

#[test]
fn two_layer_network() {
    // tanh(x W1 + b1) W2 + b2 → log-softmax → weighted NLL-style readout
    run("two_layer", &[&[5, 4], &[4, 6], &[1, 6], &[6, 3], &[1, 3]], |t, v| {
        let h = t.matmul(v[0], v[1])?;
        let h = t.add_row(h, v[2])?;
        let h = t.tanh(h);
        let o = t.matmul(h, v[3])?;
        let o = t.add_row(o, v[4])?;
        let lp = t.log_softmax(o)?;
        weighted(t, lp)
    });
}

#[test]
fn backward_is_deterministic() {
    let mut rng = seeded(42);
    let x = random_tensor(&[8, 3], -2.0, 2.0, &mut rng);
    let w = random_tensor(&[3, 5], -2.0, 2.0, &mut rng);
    let grad = || {
        let mut t = Tape::new();
        let (xv, wv) = (t.leaf(x.clone()), t.leaf(w.clone()));
        let y = t.matmul(xv, wv).unwrap();
        let y = t.log_softmax(y).unwrap();
        let l = t.sum(y);
        let y2 = t.square(l);
        let g = t.gradients(y2).unwrap();
        g.get(wv).unwrap().data().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    };
    assert_eq!(grad(), grad());
}

proptest! {
    #[test]
    fn softmax_rows_are_distributions(vals in proptest::collection::vec(-30.0f64..30.0, 12)) {
        let mut t = Tape::new();
        let x = t.leaf(Tensor::matrix(3, 4, vals).unwrap());
        let y = t.softmax(x).unwrap();
        let out = t.value(y);
        for r in 0..3 {
            let row = out.row_slice(r);
            prop_assert!(row.iter().all(|&p| p >= 0.0));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn clip_is_idempotent(g in proptest::collection::vec(-20.0f64..20.0, 1..8), max in 0.1f64..10.0) {
        let mut s = numkit::ParamStore::new();
        s.insert("w", Tensor::zeros(&[1, g.len()])).unwrap();
        s.set_flat_grads(&g).unwrap();
        numkit::clip_grad_norm(&mut s, max);
        let once = s.flat_grads();
        numkit::clip_grad_norm(&mut s, max);
        let twice = s.flat_grads();
        for (a, b) in once.iter().zip(&twice) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
