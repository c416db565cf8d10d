//! Small dense-tensor toolkit: values, a reverse-mode tape, named
//! parameter stores, AdamW with plateau decay, and a checkpoint format.

pub mod checkpoint;
pub mod error;
#[cfg(feature = "gradcheck")]
pub mod gradcheck;
pub mod optim;
pub mod params;
pub mod tape;
pub mod tensor;

pub use checkpoint::Checkpoint;
pub use error::{NumError, Result};
pub use optim::{clip_grad_norm, AdamWConfig, OptimState};
pub use params::{Param, ParamStore};
pub use tape::{Gradients, Primitive, Tape, Var};
pub use tensor::Tensor;
