use thiserror::Error;

#[derive(Debug, Error)]
pub enum CtcError {
    #[error("target of length {target_len} with {repeats} repeats needs at least {needed} frames, got {frames}")]
    Infeasible { target_len: usize, repeats: usize, needed: usize, frames: usize },

    #[error("token id {id} outside vocabulary of size {vocab}")]
    OutOfVocabulary { id: u32, vocab: usize },

    #[error("token sequence contains the blank id")]
    BlankInTarget,

    #[error("empty reference: error rate undefined")]
    EmptyReference,

    #[error("log-probabilities must be a non-empty time×vocab matrix, got {0:?}")]
    BadLogProbs(Vec<usize>),

    #[error(transparent)]
    Num(#[from] numkit::NumError),
}

pub type Result<T> = std::result::Result<T, CtcError>;
