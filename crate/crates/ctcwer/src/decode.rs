use numkit::Tensor;

use crate::{TokenSeq, BLANK};

/// Per-frame argmax, then collapse repeats, then drop blanks.
pub fn greedy_decode(log_probs: &Tensor, lang: &str) -> TokenSeq {
    let mut tokens = Vec::new();
    let mut prev = None;
    for t in 0..log_probs.rows() {
        let k = log_probs.argmax_row(t) as u32;
        if prev != Some(k) && k != BLANK {
            tokens.push(k);
        }
        prev = Some(k);
    }
    TokenSeq { tokens, lang: lang.to_string() }
}
