//! Connectionist temporal classification and error-rate scoring.
//!
//! Token id 0 is the CTC blank everywhere in this crate.

mod ctc;
mod decode;
mod error;
mod wer;

pub use ctc::{ctc_loss, ctc_loss_and_grad, is_feasible};
pub use decode::greedy_decode;
pub use error::{CtcError, Result};
pub use wer::{edit_distance, score, EditCounts, Granularity, WerScore, WordBoundaries};

use serde::{Deserialize, Serialize};

pub const BLANK: u32 = 0;

/// A transcript as token ids, blank excluded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSeq {
    pub tokens: Vec<u32>,
    pub lang: String,
}

impl TokenSeq {
    pub fn new(tokens: Vec<u32>, lang: impl Into<String>) -> Result<Self> {
        if tokens.contains(&BLANK) {
            return Err(CtcError::BlankInTarget);
        }
        Ok(Self { tokens, lang: lang.into() })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}
