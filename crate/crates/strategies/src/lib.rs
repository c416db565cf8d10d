//! Continual-learning strategies behind one lifecycle.
//!
//! For every new task a strategy is asked to [`Strategy::prepare_task`]
//! (register the task, build the training set), to contribute loss terms
//! and gradient projections while training ([`Strategy::train_batch`]),
//! and to [`Strategy::finalize_task`] (fill buffers, refresh importance,
//! freeze adapters). The harness calls `finalize_task` on the pretraining
//! stage too, so rehearsal and importance start from the base data.

mod agem;
mod buffer;
mod config;
mod distill;
mod error;
mod persist;
mod regularize;
mod strategy;

pub use agem::{agem_project, dot};
pub use buffer::{retained_count, BufferEntry, ReplayBuffer, TrainItem, TrainPlan};
pub use config::{StrategyConfig, StrategyKind};
pub use distill::{der_term, kd_term, softened_entropy};
pub use error::{Result, StrategyError};
pub use persist::{decode_state, encode_state, load_state, save_state, STATE_VERSION};
pub use regularize::{estimate_importance, ImportanceMap, ImportanceRule};
pub use strategy::{ItemForward, StepStats, Strategy, StrategyState};
