use numkit::{Tape, Tensor, Var};

use crate::error::Result;

fn softmax_rows(x: &Tensor, temperature: f64) -> Tensor {
    let c = x.cols();
    let mut out = x.data().iter().map(|v| v / temperature).collect::<Vec<_>>();
    for row in out.chunks_mut(c) {
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

fn leading_cols(tape: &mut Tape, x: Var, n: usize) -> Result<Var> {
    Ok(if tape.shape(x)[1] == n { x } else { tape.narrow(x, 1, 0, n)? })
}

fn leading_block(t: &Tensor, rows: usize, cols: usize) -> Tensor {
    let c = t.cols();
    let data = (0..rows).flat_map(|r| t.data()[r * c..r * c + cols].iter().copied()).collect();
    Tensor::matrix(rows, cols, data).expect("non-empty block")
}

/// Per-frame cross-entropy between temperature-softened teacher and
/// student distributions, averaged over frames.
///
/// Only the leading columns both share are compared, so a student whose
/// head grew can still be distilled.
pub fn kd_term(tape: &mut Tape, student: Var, teacher: &Tensor, temperature: f64) -> Result<Var> {
    let rows = tape.shape(student)[0].min(teacher.rows());
    let cols = tape.shape(student)[1].min(teacher.cols());
    let mut s = leading_cols(tape, student, cols)?;
    if rows != tape.shape(s)[0] {
        s = tape.narrow(s, 0, 0, rows)?;
    }
    let p = tape.constant(softmax_rows(&leading_block(teacher, rows, cols), temperature));
    let s = tape.scale(s, 1.0 / temperature);
    let ls = tape.log_softmax(s)?;
    let prod = tape.mul(p, ls)?;
    let total = tape.sum(prod);
    Ok(tape.scale(total, -1.0 / rows as f64))
}

/// Mean squared difference between student logits and stored logits over
/// their common leading block.
pub fn der_term(tape: &mut Tape, student: Var, stored: &Tensor) -> Result<Var> {
    let rows = tape.shape(student)[0].min(stored.rows());
    let cols = tape.shape(student)[1].min(stored.cols());
    let mut s = leading_cols(tape, student, cols)?;
    if rows != tape.shape(s)[0] {
        s = tape.narrow(s, 0, 0, rows)?;
    }
    let target = tape.constant(leading_block(stored, rows, cols));
    let d = tape.sub(s, target)?;
    let sq = tape.square(d);
    Ok(tape.mean(sq))
}

/// Entropy of the softened distribution per frame, averaged; the minimum
/// of [`kd_term`] over students.
pub fn softened_entropy(logits: &Tensor, temperature: f64) -> f64 {
    let p = softmax_rows(logits, temperature);
    -p.data().iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>() / logits.rows() as f64
}
