use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{CtcError, Result};
use crate::TokenSeq;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditCounts {
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
}

impl EditCounts {
    pub fn total(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }
}

/// Unit-cost Levenshtein alignment of `hyp` against `reference`.
///
/// When several alignments share the minimal cost the backtrace prefers a
/// substitution over an insertion/deletion pair.
pub fn edit_distance<T: PartialEq>(reference: &[T], hyp: &[T]) -> EditCounts {
    let (n, m) = (reference.len(), hyp.len());
    let w = m + 1;
    let mut d = vec![0usize; (n + 1) * w];
    for i in 0..=n {
        d[i * w] = i;
    }
    for j in 0..=m {
        d[j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[(i - 1) * w + j - 1] + usize::from(reference[i - 1] != hyp[j - 1]);
            let del = d[(i - 1) * w + j] + 1;
            let ins = d[i * w + j - 1] + 1;
            d[i * w + j] = sub.min(del).min(ins);
        }
    }
    let mut counts = EditCounts::default();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let same = reference[i - 1] == hyp[j - 1];
            if here == d[(i - 1) * w + j - 1] + usize::from(!same) {
                if !same {
                    counts.substitutions += 1;
                }
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * w + j] + 1 {
            counts.deletions += 1;
            i -= 1;
        } else {
            counts.insertions += 1;
            j -= 1;
        }
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Word,
    Char,
}

/// How a language marks word boundaries in its token stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordBoundaries {
    /// Words are separated by this token id.
    Separator(u32),
    /// No notion of words (e.g. Chinese, Japanese); always scored per unit.
    None,
}

/// Error counts against a reference of `ref_len` units.
///
/// Scores add, so corpus-level rates are the sum of per-utterance counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WerScore {
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
    pub ref_len: usize,
}

impl WerScore {
    /// `(S + I + D) / N`, not clamped at 1.
    pub fn rate(&self) -> Result<f64> {
        if self.ref_len == 0 {
            return Err(CtcError::EmptyReference);
        }
        Ok((self.substitutions + self.insertions + self.deletions) as f64 / self.ref_len as f64)
    }
}

impl Add for WerScore {
    type Output = WerScore;

    fn add(self, o: WerScore) -> WerScore {
        WerScore {
            substitutions: self.substitutions + o.substitutions,
            insertions: self.insertions + o.insertions,
            deletions: self.deletions + o.deletions,
            ref_len: self.ref_len + o.ref_len,
        }
    }
}

impl AddAssign for WerScore {
    fn add_assign(&mut self, o: WerScore) {
        *self = *self + o;
    }
}

impl std::iter::Sum for WerScore {
    fn sum<I: Iterator<Item = WerScore>>(iter: I) -> WerScore {
        iter.fold(WerScore::default(), Add::add)
    }
}

fn words(tokens: &[u32], sep: u32) -> Vec<&[u32]> {
    tokens.split(|&t| t == sep).filter(|w| !w.is_empty()).collect()
}

/// Scores `hyp` against `reference`. Languages without word boundaries are
/// always scored at character (token) level, whatever was requested.
pub fn score(
    reference: &TokenSeq,
    hyp: &TokenSeq,
    requested: Granularity,
    boundaries: WordBoundaries,
) -> Result<WerScore> {
    let (counts, ref_len) = match (requested, boundaries) {
        (Granularity::Word, WordBoundaries::Separator(sep)) => {
            let r = words(&reference.tokens, sep);
            let h = words(&hyp.tokens, sep);
            (edit_distance(&r, &h), r.len())
        }
        _ => (edit_distance(&reference.tokens, &hyp.tokens), reference.len()),
    };
    if ref_len == 0 {
        return Err(CtcError::EmptyReference);
    }
    Ok(WerScore {
        substitutions: counts.substitutions,
        insertions: counts.insertions,
        deletions: counts.deletions,
        ref_len,
    })
}
