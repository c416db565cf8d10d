//! Deterministic synthetic "languages".
//!
//! Every language draws its output tokens from a global token universe:
//! id 0 is the CTC blank, id 1 the word separator, then a pool of tokens
//! that languages may share, then one private block per language. Each
//! token has a prototype feature vector; an utterance is a bigram-chain
//! transcript whose tokens are each emitted as a few noisy copies of their
//! prototype.

mod error;
mod language;
mod manifest;
mod seed;

pub use error::{Result, SynthError};
pub use language::{gen_language, sample_utterance, LanguageConfig, SEPARATOR, Split, SplitSizes, TaskSpec, Universe, Utterance};
pub use manifest::{export_split, read_features, read_manifest, write_features, write_manifest, Feats, Manifest, ManifestRecord, ManifestRules};
pub use seed::derive_seed;
