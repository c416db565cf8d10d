//! Reverse-mode differentiation over a linear tape.
//!
//! Every primitive appends one node holding its output value, so the tape
//! is topologically ordered by construction. [`Tape::gradients`] walks it
//! once in reverse, skipping nodes that do not depend on a differentiable
//! leaf.

use std::fmt;

use crate::error::{NumError, Result};
use crate::params::ParamStore;
use crate::tensor::{matmul_nt_raw, matmul_raw, matmul_tn_raw, Tensor};

/// Handle to a node on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A differentiable operation defined outside this crate.
///
/// The output is computed eagerly by the caller; `backward` maps the
/// upstream gradient to one gradient per input, in input order.
pub trait Primitive: Send + Sync {
    fn name(&self) -> &'static str;
    fn backward(&self, inputs: &[&Tensor], output: &Tensor, grad: &Tensor) -> Vec<Tensor>;
}

enum Op {
    Leaf,
    Constant,
    Param(usize),
    MatMul(Var, Var),
    MatMulNt(Var, Var),
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    AddRow(Var, Var),
    Scale(Var, f64),
    Tanh(Var),
    Square(Var),
    Sum(Var),
    Mean(Var),
    LogSoftmax(Var),
    Softmax(Var),
    Narrow { input: Var, axis: usize, start: usize },
    Rnn { x: Var, w_in: Var, w_rec: Var, bias: Var },
    ThresholdSte(Var),
    Custom(Box<dyn Primitive>, Vec<Var>),
}

impl Op {
    fn name(&self) -> &'static str {
        match self {
            Op::Leaf => "leaf",
            Op::Constant => "constant",
            Op::Param(_) => "param",
            Op::MatMul(..) => "matmul",
            Op::MatMulNt(..) => "matmul_nt",
            Op::Add(..) => "add",
            Op::Sub(..) => "sub",
            Op::Mul(..) => "mul",
            Op::AddRow(..) => "add_row",
            Op::Scale(..) => "scale",
            Op::Tanh(_) => "tanh",
            Op::Square(_) => "square",
            Op::Sum(_) => "sum",
            Op::Mean(_) => "mean",
            Op::LogSoftmax(_) => "log_softmax",
            Op::Softmax(_) => "softmax",
            Op::Narrow { .. } => "narrow",
            Op::Rnn { .. } => "rnn_tanh",
            Op::ThresholdSte(_) => "threshold_ste",
            Op::Custom(p, _) => p.name(),
        }
    }
}

struct Node {
    value: Tensor,
    op: Op,
    needs_grad: bool,
}

/// Recorded computation. Single-writer; build one per forward pass.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl fmt::Debug for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tape").field("nodes", &self.nodes.len()).finish()
    }
}

/// Per-node gradients produced by [`Tape::gradients`].
#[derive(Debug)]
pub struct Gradients {
    grads: Vec<Option<Tensor>>,
}

impl Gradients {
    pub fn get(&self, var: Var) -> Option<&Tensor> {
        self.grads.get(var.0).and_then(|g| g.as_ref())
    }
}

fn mismatch(op: &'static str, shapes: &[&[usize]]) -> NumError {
    NumError::ShapeMismatch { op, shapes: shapes.iter().map(|s| s.to_vec()).collect() }
}

fn row_softmax(x: &Tensor) -> Tensor {
    let (r, c) = (x.rows(), x.cols());
    let mut out = x.data().to_vec();
    for i in 0..r {
        let row = &mut out[i * c..(i + 1) * c];
        let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for v in row.iter_mut() {
            *v = (*v - m).exp();
            z += *v;
        }
        row.iter_mut().for_each(|v| *v /= z);
    }
    Tensor::new(x.shape().to_vec(), out).expect("same shape")
}

fn row_log_softmax(x: &Tensor) -> Tensor {
    let (r, c) = (x.rows(), x.cols());
    let mut out = x.data().to_vec();
    for i in 0..r {
        let row = &mut out[i * c..(i + 1) * c];
        let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + row.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        row.iter_mut().for_each(|v| *v -= lse);
    }
    Tensor::new(x.shape().to_vec(), out).expect("same shape")
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, var: Var) -> &Tensor {
        &self.nodes[var.0].value
    }

    pub fn shape(&self, var: Var) -> &[usize] {
        self.nodes[var.0].value.shape()
    }

    /// Name of the primitive that produced `var`.
    pub fn op_name(&self, var: Var) -> &'static str {
        self.nodes[var.0].op.name()
    }

    fn push(&mut self, value: Tensor, op: Op, needs_grad: bool) -> Var {
        self.nodes.push(Node { value, op, needs_grad });
        Var(self.nodes.len() - 1)
    }

    fn ng(&self, vars: &[Var]) -> bool {
        vars.iter().any(|v| self.nodes[v.0].needs_grad)
    }

    /// Differentiable input not tied to a parameter store.
    pub fn leaf(&mut self, value: Tensor) -> Var {
        self.push(value, Op::Leaf, true)
    }

    pub fn constant(&mut self, value: Tensor) -> Var {
        self.push(value, Op::Constant, false)
    }

    /// Loads a parameter. Frozen parameters enter the tape as constants.
    pub fn param(&mut self, store: &ParamStore, name: &str) -> Result<Var> {
        let (idx, p) = store.entry(name)?;
        let value = p.value.clone_values();
        Ok(self.push(value, Op::Param(idx), !p.frozen))
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a), self.shape(b));
        if sa.len() != 2 || sb.len() != 2 || sa[1] != sb[0] {
            return Err(mismatch("matmul", &[sa, sb]));
        }
        let (m, k, n) = (sa[0], sa[1], sb[1]);
        let out = matmul_raw(self.value(a).data(), self.value(b).data(), m, k, n);
        let ng = self.ng(&[a, b]);
        Ok(self.push(Tensor::matrix(m, n, out)?, Op::MatMul(a, b), ng))
    }

    /// `a · bᵀ`, with `b` stored row-per-output (e.g. a projection `V×d`).
    pub fn matmul_nt(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a), self.shape(b));
        if sa.len() != 2 || sb.len() != 2 || sa[1] != sb[1] {
            return Err(mismatch("matmul_nt", &[sa, sb]));
        }
        let (m, k, n) = (sa[0], sa[1], sb[0]);
        let out = matmul_nt_raw(self.value(a).data(), self.value(b).data(), m, k, n);
        let ng = self.ng(&[a, b]);
        Ok(self.push(Tensor::matrix(m, n, out)?, Op::MatMulNt(a, b), ng))
    }

    fn same_shape(&self, op: &'static str, a: Var, b: Var) -> Result<()> {
        if self.shape(a) != self.shape(b) {
            return Err(mismatch(op, &[self.shape(a), self.shape(b)]));
        }
        Ok(())
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("add", a, b)?;
        let v = self.value(a).zip_map(self.value(b), |x, y| x + y);
        let ng = self.ng(&[a, b]);
        Ok(self.push(v, Op::Add(a, b), ng))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("sub", a, b)?;
        let v = self.value(a).zip_map(self.value(b), |x, y| x - y);
        let ng = self.ng(&[a, b]);
        Ok(self.push(v, Op::Sub(a, b), ng))
    }

    /// Elementwise product.
    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("mul", a, b)?;
        let v = self.value(a).zip_map(self.value(b), |x, y| x * y);
        let ng = self.ng(&[a, b]);
        Ok(self.push(v, Op::Mul(a, b), ng))
    }

    /// Adds a `1×n` row to every row of an `m×n` matrix.
    pub fn add_row(&mut self, a: Var, row: Var) -> Result<Var> {
        let (sa, sr) = (self.shape(a), self.shape(row));
        if sa.len() != 2 || sr != [1, sa[1]] {
            return Err(mismatch("add_row", &[sa, sr]));
        }
        let n = sa[1];
        let r = self.value(row).data().to_vec();
        let mut v = self.value(a).clone_values();
        for (i, x) in v.data_mut().iter_mut().enumerate() {
            *x += r[i % n];
        }
        let ng = self.ng(&[a, row]);
        Ok(self.push(v, Op::AddRow(a, row), ng))
    }

    pub fn scale(&mut self, a: Var, c: f64) -> Var {
        let v = self.value(a).map(|x| x * c);
        let ng = self.ng(&[a]);
        self.push(v, Op::Scale(a, c), ng)
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let v = self.value(a).map(f64::tanh);
        let ng = self.ng(&[a]);
        self.push(v, Op::Tanh(a), ng)
    }

    pub fn square(&mut self, a: Var) -> Var {
        let v = self.value(a).map(|x| x * x);
        let ng = self.ng(&[a]);
        self.push(v, Op::Square(a), ng)
    }

    pub fn sum(&mut self, a: Var) -> Var {
        let v = Tensor::scalar(self.value(a).sum());
        let ng = self.ng(&[a]);
        self.push(v, Op::Sum(a), ng)
    }

    pub fn mean(&mut self, a: Var) -> Var {
        let t = self.value(a);
        let v = Tensor::scalar(t.sum() / t.len() as f64);
        let ng = self.ng(&[a]);
        self.push(v, Op::Mean(a), ng)
    }

    fn require_matrix(&self, op: &'static str, a: Var) -> Result<()> {
        if self.shape(a).len() != 2 {
            return Err(mismatch(op, &[self.shape(a)]));
        }
        Ok(())
    }

    /// Row-wise log-softmax of a matrix.
    pub fn log_softmax(&mut self, a: Var) -> Result<Var> {
        self.require_matrix("log_softmax", a)?;
        let v = row_log_softmax(self.value(a));
        let ng = self.ng(&[a]);
        Ok(self.push(v, Op::LogSoftmax(a), ng))
    }

    /// Row-wise softmax of a matrix.
    pub fn softmax(&mut self, a: Var) -> Result<Var> {
        self.require_matrix("softmax", a)?;
        let v = row_softmax(self.value(a));
        let ng = self.ng(&[a]);
        Ok(self.push(v, Op::Softmax(a), ng))
    }

    /// Contiguous slice `[start, start+len)` along `axis` (0 = rows, 1 = cols).
    pub fn narrow(&mut self, a: Var, axis: usize, start: usize, len: usize) -> Result<Var> {
        let s = self.shape(a).to_vec();
        if s.len() != 2 || axis > 1 || len == 0 || start + len > s[axis] {
            return Err(NumError::ShapeMismatch { op: "narrow", shapes: vec![s, vec![axis, start, len]] });
        }
        let src = self.value(a);
        let (r, c) = (s[0], s[1]);
        let v = if axis == 0 {
            Tensor::matrix(len, c, src.data()[start * c..(start + len) * c].to_vec())?
        } else {
            let mut d = Vec::with_capacity(r * len);
            for i in 0..r {
                d.extend_from_slice(&src.data()[i * c + start..i * c + start + len]);
            }
            Tensor::matrix(r, len, d)?
        };
        let ng = self.ng(&[a]);
        Ok(self.push(v, Op::Narrow { input: a, axis, start }, ng))
    }

    /// Elman recurrence `h_t = tanh(x_t·W_in + h_{t-1}·W_rec + b)` with `h_{-1} = 0`.
    ///
    /// `x` is `T×d_in`, `w_in` is `d_in×h`, `w_rec` is `h×h`, `bias` is `1×h`.
    pub fn rnn_tanh(&mut self, x: Var, w_in: Var, w_rec: Var, bias: Var) -> Result<Var> {
        let (sx, si, sr, sb) = (self.shape(x), self.shape(w_in), self.shape(w_rec), self.shape(bias));
        let ok = sx.len() == 2
            && si.len() == 2
            && sx[1] == si[0]
            && sr == [si[1], si[1]]
            && sb == [1, si[1]];
        if !ok {
            return Err(mismatch("rnn_tanh", &[sx, si, sr, sb]));
        }
        let (t_len, d_in, h) = (sx[0], sx[1], si[1]);
        let pre = matmul_raw(self.value(x).data(), self.value(w_in).data(), t_len, d_in, h);
        let wr = self.value(w_rec).data();
        let b = self.value(bias).data();
        let mut out = vec![0.0; t_len * h];
        for t in 0..t_len {
            let mut a: Vec<f64> = (0..h).map(|j| pre[t * h + j] + b[j]).collect();
            if t > 0 {
                let prev = &out[(t - 1) * h..t * h];
                for (p, &hv) in prev.iter().enumerate() {
                    if hv == 0.0 {
                        continue;
                    }
                    let wrow = &wr[p * h..(p + 1) * h];
                    for (aj, &w) in a.iter_mut().zip(wrow) {
                        *aj += hv * w;
                    }
                }
            }
            for (j, aj) in a.into_iter().enumerate() {
                out[t * h + j] = aj.tanh();
            }
        }
        let ng = self.ng(&[x, w_in, w_rec, bias]);
        Ok(self.push(Tensor::matrix(t_len, h, out)?, Op::Rnn { x, w_in, w_rec, bias }, ng))
    }

    /// Binary mask `1[w > threshold]`; backward is the identity (straight-through).
    pub fn threshold_ste(&mut self, w: Var, threshold: f64) -> Var {
        let v = self.value(w).map(|x| if x > threshold { 1.0 } else { 0.0 });
        let ng = self.ng(&[w]);
        self.push(v, Op::ThresholdSte(w), ng)
    }

    /// Records an externally computed primitive.
    pub fn custom(&mut self, prim: Box<dyn Primitive>, inputs: &[Var], output: Tensor) -> Var {
        let ng = self.ng(inputs);
        self.push(output, Op::Custom(prim, inputs.to_vec()), ng)
    }

    /// Reverse sweep from a scalar `loss`.
    pub fn gradients(&self, loss: Var) -> Result<Gradients> {
        let lv = self.value(loss);
        if !lv.is_scalar() {
            return Err(NumError::NotScalar(lv.shape().to_vec()));
        }
        let mut grads: Vec<Option<Tensor>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[loss.0] = Some(Tensor::scalar(1.0));
        for i in (0..=loss.0).rev() {
            let node = &self.nodes[i];
            if !node.needs_grad {
                continue;
            }
            let Some(g) = grads[i].take() else { continue };
            self.propagate(node, &g, &mut grads);
            grads[i] = Some(g);
        }
        Ok(Gradients { grads })
    }

    /// Runs [`Tape::gradients`] and adds each parameter gradient into its
    /// slot in `store`.
    pub fn backward(&self, loss: Var, store: &mut ParamStore) -> Result<()> {
        let grads = self.gradients(loss)?;
        for (i, node) in self.nodes.iter().enumerate() {
            if let (Op::Param(idx), Some(g)) = (&node.op, grads.grads[i].as_ref()) {
                store.accumulate_grad(*idx, g.data())?;
            }
        }
        Ok(())
    }

    fn propagate(&self, node: &Node, g: &Tensor, grads: &mut [Option<Tensor>]) {
        let val = |v: Var| &self.nodes[v.0].value;
        let mut send = |v: Var, t: Tensor| {
            if !self.nodes[v.0].needs_grad {
                return;
            }
            match &mut grads[v.0] {
                Some(acc) => acc.data_mut().iter_mut().zip(t.data()).for_each(|(a, b)| *a += b),
                slot @ None => *slot = Some(t),
            }
        };
        match &node.op {
            Op::Leaf | Op::Constant | Op::Param(_) => {}
            Op::MatMul(a, b) => {
                let (m, k) = (val(*a).rows(), val(*a).cols());
                let n = val(*b).cols();
                let ga = matmul_nt_raw(g.data(), val(*b).data(), m, n, k);
                let gb = matmul_tn_raw(val(*a).data(), g.data(), m, k, n);
                send(*a, Tensor::matrix(m, k, ga).unwrap());
                send(*b, Tensor::matrix(k, n, gb).unwrap());
            }
            Op::MatMulNt(a, b) => {
                let (m, k) = (val(*a).rows(), val(*a).cols());
                let n = val(*b).rows();
                let ga = matmul_raw(g.data(), val(*b).data(), m, n, k);
                let gb = matmul_tn_raw(g.data(), val(*a).data(), m, n, k);
                send(*a, Tensor::matrix(m, k, ga).unwrap());
                send(*b, Tensor::matrix(n, k, gb).unwrap());
            }
            Op::Add(a, b) => {
                send(*a, g.clone_values());
                send(*b, g.clone_values());
            }
            Op::Sub(a, b) => {
                send(*a, g.clone_values());
                send(*b, g.map(|x| -x));
            }
            Op::Mul(a, b) => {
                send(*a, g.zip_map(val(*b), |x, y| x * y));
                send(*b, g.zip_map(val(*a), |x, y| x * y));
            }
            Op::AddRow(a, r) => {
                let n = g.cols();
                let mut gr = vec![0.0; n];
                for (i, x) in g.data().iter().enumerate() {
                    gr[i % n] += x;
                }
                send(*a, g.clone_values());
                send(*r, Tensor::row(gr).unwrap());
            }
            Op::Scale(a, c) => send(*a, g.map(|x| x * c)),
            Op::Tanh(a) => send(*a, g.zip_map(&node.value, |x, y| x * (1.0 - y * y))),
            Op::Square(a) => send(*a, g.zip_map(val(*a), |x, y| 2.0 * x * y)),
            Op::Sum(a) => send(*a, Tensor::full(val(*a).shape(), g.item())),
            Op::Mean(a) => {
                let n = val(*a).len() as f64;
                send(*a, Tensor::full(val(*a).shape(), g.item() / n));
            }
            Op::LogSoftmax(a) => {
                let sm = node.value.map(f64::exp);
                let (r, c) = (g.rows(), g.cols());
                let mut out = g.data().to_vec();
                for i in 0..r {
                    let gs: f64 = g.row_slice(i).iter().sum();
                    for j in 0..c {
                        out[i * c + j] -= sm.data()[i * c + j] * gs;
                    }
                }
                send(*a, Tensor::new(g.shape().to_vec(), out).unwrap());
            }
            Op::Softmax(a) => {
                let y = &node.value;
                let (r, c) = (g.rows(), g.cols());
                let mut out = vec![0.0; r * c];
                for i in 0..r {
                    let dot: f64 = g.row_slice(i).iter().zip(y.row_slice(i)).map(|(a, b)| a * b).sum();
                    for j in 0..c {
                        out[i * c + j] = y.data()[i * c + j] * (g.data()[i * c + j] - dot);
                    }
                }
                send(*a, Tensor::new(g.shape().to_vec(), out).unwrap());
            }
            Op::Narrow { input, axis, start } => {
                let src = val(*input);
                let (_, c) = (src.rows(), src.cols());
                let mut full = Tensor::zeros(src.shape());
                if *axis == 0 {
                    full.data_mut()[start * c..start * c + g.len()].copy_from_slice(g.data());
                } else {
                    let len = g.cols();
                    for i in 0..g.rows() {
                        full.data_mut()[i * c + start..i * c + start + len].copy_from_slice(g.row_slice(i));
                    }
                }
                send(*input, full);
            }
            Op::Rnn { x, w_in, w_rec, bias } => {
                let (t_len, d_in) = (val(*x).rows(), val(*x).cols());
                let h = val(*w_in).cols();
                let hs = node.value.data();
                let wi = val(*w_in).data();
                let wr = val(*w_rec).data();
                let xs = val(*x).data();
                let mut gx = vec![0.0; t_len * d_in];
                let mut gwi = vec![0.0; d_in * h];
                let mut gwr = vec![0.0; h * h];
                let mut gb = vec![0.0; h];
                let mut carry = vec![0.0; h];
                for t in (0..t_len).rev() {
                    let ht = &hs[t * h..(t + 1) * h];
                    let da: Vec<f64> = (0..h)
                        .map(|j| (g.data()[t * h + j] + carry[j]) * (1.0 - ht[j] * ht[j]))
                        .collect();
                    for (j, &d) in da.iter().enumerate() {
                        gb[j] += d;
                    }
                    let xt = &xs[t * d_in..(t + 1) * d_in];
                    for (p, &xv) in xt.iter().enumerate() {
                        let row = &mut gwi[p * h..(p + 1) * h];
                        row.iter_mut().zip(&da).for_each(|(o, d)| *o += xv * d);
                        gx[t * d_in + p] = wi[p * h..(p + 1) * h].iter().zip(&da).map(|(w, d)| w * d).sum();
                    }
                    if t > 0 {
                        let hp = &hs[(t - 1) * h..t * h];
                        for (p, &hv) in hp.iter().enumerate() {
                            let row = &mut gwr[p * h..(p + 1) * h];
                            row.iter_mut().zip(&da).for_each(|(o, d)| *o += hv * d);
                            carry[p] = wr[p * h..(p + 1) * h].iter().zip(&da).map(|(w, d)| w * d).sum();
                        }
                    }
                }
                send(*x, Tensor::matrix(t_len, d_in, gx).unwrap());
                send(*w_in, Tensor::matrix(d_in, h, gwi).unwrap());
                send(*w_rec, Tensor::matrix(h, h, gwr).unwrap());
                send(*bias, Tensor::matrix(1, h, gb).unwrap());
            }
            Op::ThresholdSte(w) => send(*w, g.clone_values()),
            Op::Custom(prim, inputs) => {
                let ins: Vec<&Tensor> = inputs.iter().map(|v| val(*v)).collect();
                for (v, t) in inputs.iter().zip(prim.backward(&ins, &node.value, g)) {
                    send(*v, t);
                }
            }
        }
    }
}

impl Tensor {
    /// Copy of the values without the gradient slot.
    pub fn clone_values(&self) -> Tensor {
        Tensor::new(self.shape().to_vec(), self.data().to_vec()).expect("valid tensor")
    }
}
