use numkit::{Primitive, Tape, Tensor, Var};

use crate::error::{CtcError, Result};
use crate::{TokenSeq, BLANK};

fn lse2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn lse3(a: f64, b: f64, c: f64) -> f64 {
    lse2(lse2(a, b), c)
}

fn repeats(target: &[u32]) -> usize {
    target.windows(2).filter(|w| w[0] == w[1]).count()
}

/// A target of length `L` with `r` adjacent repeats needs `L + r` frames.
pub fn is_feasible(frames: usize, target: &[u32]) -> bool {
    frames >= target.len() + repeats(target)
}

/// Negative log-likelihood of `target` under per-frame log-probabilities
/// `log_probs` (time×vocab), together with its gradient with respect to
/// `log_probs`. Computed with the forward–backward recursions in log space.
pub fn ctc_loss_and_grad(log_probs: &Tensor, target: &[u32]) -> Result<(f64, Tensor)> {
    let (frames, vocab) = log_probs.dims2().ok_or_else(|| CtcError::BadLogProbs(log_probs.shape().to_vec()))?;
    for &id in target {
        if id == BLANK {
            return Err(CtcError::BlankInTarget);
        }
        if id as usize >= vocab {
            return Err(CtcError::OutOfVocabulary { id, vocab });
        }
    }
    if !is_feasible(frames, target) {
        let r = repeats(target);
        return Err(CtcError::Infeasible { target_len: target.len(), repeats: r, needed: target.len() + r, frames });
    }

    // extended label sequence: ∅ l1 ∅ l2 … ∅
    let mut ext = Vec::with_capacity(2 * target.len() + 1);
    ext.push(BLANK);
    for &l in target {
        ext.push(l);
        ext.push(BLANK);
    }
    let s_len = ext.len();
    let lp = |t: usize, s: usize| log_probs.at(t, ext[s] as usize);
    let can_skip = |s: usize| s >= 2 && ext[s] != BLANK && ext[s] != ext[s - 2];

    let ninf = f64::NEG_INFINITY;
    let mut alpha = vec![ninf; frames * s_len];
    alpha[0] = lp(0, 0);
    if s_len > 1 {
        alpha[1] = lp(0, 1);
    }
    for t in 1..frames {
        for s in 0..s_len {
            let prev = &alpha[(t - 1) * s_len..t * s_len];
            let a = prev[s];
            let b = if s >= 1 { prev[s - 1] } else { ninf };
            let c = if can_skip(s) { prev[s - 2] } else { ninf };
            let acc = lse3(a, b, c);
            alpha[t * s_len + s] = if acc == ninf { ninf } else { acc + lp(t, s) };
        }
    }

    let mut beta = vec![ninf; frames * s_len];
    let last = frames - 1;
    beta[last * s_len + s_len - 1] = lp(last, s_len - 1);
    if s_len > 1 {
        beta[last * s_len + s_len - 2] = lp(last, s_len - 2);
    }
    for t in (0..last).rev() {
        for s in 0..s_len {
            let next = &beta[(t + 1) * s_len..(t + 2) * s_len];
            let a = next[s];
            let b = if s + 1 < s_len { next[s + 1] } else { ninf };
            let c = if s + 2 < s_len && can_skip(s + 2) { next[s + 2] } else { ninf };
            let acc = lse3(a, b, c);
            beta[t * s_len + s] = if acc == ninf { ninf } else { acc + lp(t, s) };
        }
    }

    let end = &alpha[last * s_len..];
    let log_total = if s_len > 1 { lse2(end[s_len - 1], end[s_len - 2]) } else { end[0] };

    let mut grad = Tensor::zeros(&[frames, vocab]);
    for t in 0..frames {
        for s in 0..s_len {
            let ab = alpha[t * s_len + s] + beta[t * s_len + s];
            if ab == ninf {
                continue;
            }
            let occ = (ab - lp(t, s) - log_total).exp();
            grad.data_mut()[t * vocab + ext[s] as usize] -= occ;
        }
    }
    Ok((-log_total, grad))
}

struct CtcPrimitive {
    grad: Tensor,
}

impl Primitive for CtcPrimitive {
    fn name(&self) -> &'static str {
        "ctc_loss"
    }

    fn backward(&self, _inputs: &[&Tensor], _output: &Tensor, grad: &Tensor) -> Vec<Tensor> {
        let g = grad.item();
        vec![self.grad.map(|x| x * g)]
    }
}

/// Records the CTC loss of `target` on the tape as a scalar.
///
/// `log_probs` should be log-softmax normalized per frame; gradients flow
/// back into it.
pub fn ctc_loss(tape: &mut Tape, log_probs: Var, target: &TokenSeq) -> Result<Var> {
    let (loss, grad) = ctc_loss_and_grad(tape.value(log_probs), &target.tokens)?;
    Ok(tape.custom(Box::new(CtcPrimitive { grad }), &[log_probs], Tensor::scalar(loss)))
}
