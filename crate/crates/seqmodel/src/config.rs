use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderConfig {
    pub d_in: usize,
    pub d_model: usize,
    pub num_layers: usize,
    /// Size of the global token space, blank (id 0) included.
    pub vocab_size: usize,
}

impl EncoderConfig {
    pub fn new(d_in: usize, vocab_size: usize) -> Self {
        Self { d_in, d_model: 64, num_layers: 2, vocab_size }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_in == 0 || self.d_model == 0 || self.num_layers == 0 {
            return Err(ModelError::Invalid(format!("all dimensions must be positive: {self:?}")));
        }
        if self.vocab_size < 2 {
            return Err(ModelError::Invalid("vocabulary needs at least blank and one token".into()));
        }
        Ok(())
    }
}

/// How output tokens are organized across languages.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenRegime {
    /// One head over the union vocabulary plus one language token per task.
    #[default]
    Shared,
    /// A separate head per language over that language's own tokens.
    PerLanguage,
}

impl TokenRegime {
    pub fn name(self) -> &'static str {
        match self {
            TokenRegime::Shared => "shared",
            TokenRegime::PerLanguage => "per-language",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdapterConfig {
    /// Initial value of every real-valued mask weight.
    pub mask_init: f64,
    pub mask_threshold: f64,
    /// Prompts start at identity plus uniform noise of this half-width.
    pub prompt_noise: f64,
}

impl Default for AdapterConfig {
    fn default() -> Self {
        Self { mask_init: 0.01, mask_threshold: 0.005, prompt_noise: 0.01 }
    }
}
