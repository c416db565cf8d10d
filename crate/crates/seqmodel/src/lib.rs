//! Small recurrent CTC transcription model.
//!
//! A stack of Elman layers encodes frames; a linear head scores tokens.
//! Tasks either share one head over the union vocabulary, told apart by a
//! language token whose embedding row doubles as an input offset, or get
//! a head of their own. Adapters (progressive columns, binary masks,
//! prompt matrices) add a task without touching existing parameters.

mod config;
mod error;
mod model;

pub use config::{AdapterConfig, EncoderConfig, TokenRegime};
pub use error::{ModelError, Result};
pub use model::{pack_mask, unpack_mask, Adapter, AdapterKind, MaskSpec, Model, TaskHead, SHARED_BIAS, SHARED_WEIGHT};
pub use numkit::{Checkpoint, ParamStore};
