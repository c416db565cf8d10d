//! Continual-learning experiment harness.
//!
//! A run pretrains a base model jointly on the base languages, then
//! learns new languages one at a time under a chosen strategy,
//! evaluating every task seen so far after each stage. The resulting
//! lower-triangular [`WerMatrix`] feeds the four metrics (AWER, BWT, IM,
//! FWT); IM and FWT also need joint and solo reference runs. Ordering and
//! imbalance studies repeat runs under controlled variations.

mod config;
mod error;
mod experiment;
mod matrix;
mod metrics;
mod plot;
mod record;
mod studies;
mod suite;
mod train;

pub use config::{DataSection, ExperimentConfig, ModelSection, RunSection, TrainingSection};
pub use error::{BenchError, Result};
pub use experiment::{evaluate_row, stage_rng, Runner, SequenceOutcome};
pub use matrix::{write_atomic, ReferenceBudget, ReferenceWers, WerMatrix, BASE_TASK};
pub use metrics::{
    awer, bwt, column_mean, fwt, im, mean_std, read_metrics_csv, write_metrics_csv, MetricRow, MetricSeries, METRICS,
};
pub use plot::emit_plot_data;
pub use record::{
    recompute_from_files, ExperimentRecord, Recomputed, Seeds, FORMAT_VERSION, MATRIX_FILE, METRICS_FILE, RECORD_FILE,
    REFERENCES_FILE,
};
pub use studies::{
    imbalance_study, ordering_study, ordering_study_with, orderings, regime_label, ImbalanceRow, ImbalanceSummary,
    OrderingSummary, StageStat,
};
pub use suite::{LanguageData, Suite};
pub use train::{evaluate, mean_loss, train_stage, StageLog};
