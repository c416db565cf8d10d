//! The persisted result of one run.
//!
//! A run directory holds `record.json` (the full [`ExperimentRecord`]),
//! plus `wer_matrix.csv`, `references.csv` and `metrics.csv` rendered from
//! it. `record.json` carries `format_version`; the CSV layouts are
//! documented in [`crate::matrix`] and [`crate::metrics`] and versioned
//! with it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use strategies::StrategyKind;

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};
use crate::matrix::{write_atomic, ReferenceWers, WerMatrix};
use crate::metrics::{read_metrics_csv, write_metrics_csv, MetricSeries};
use crate::train::StageLog;

pub const FORMAT_VERSION: u32 = 1;

pub const RECORD_FILE: &str = "record.json";
pub const MATRIX_FILE: &str = "wer_matrix.csv";
pub const REFERENCES_FILE: &str = "references.csv";
pub const METRICS_FILE: &str = "metrics.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub data: u64,
    pub run: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub format_version: u32,
    pub config_hash: String,
    pub strategy: StrategyKind,
    pub order: Vec<String>,
    pub seeds: Seeds,
    pub config: ExperimentConfig,
    pub wer_matrix: WerMatrix,
    pub references: ReferenceWers,
    pub metrics: MetricSeries,
    /// Pretraining log; shared by all strategies with the same base.
    pub base: StageLog,
    /// One log per new language, with wall-clock seconds.
    pub stages: Vec<StageLog>,
    pub warnings: Vec<String>,
}

impl ExperimentRecord {
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.wer_matrix.write_csv(&dir.join(MATRIX_FILE))?;
        self.references.write_csv(&dir.join(REFERENCES_FILE))?;
        write_metrics_csv(&dir.join(METRICS_FILE), &self.metrics.to_rows())?;
        write_atomic(&dir.join(RECORD_FILE), &serde_json::to_vec_pretty(self)?)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(RECORD_FILE);
        let r: Self = serde_json::from_slice(&std::fs::read(&path)?)?;
        if r.format_version != FORMAT_VERSION {
            return Err(BenchError::Format {
                path: path.display().to_string(),
                reason: format!("format version {} (reader supports {FORMAT_VERSION})", r.format_version),
            });
        }
        Ok(r)
    }

    /// Largest gap between stored metrics and a recomputation from the
    /// stored matrix and references.
    pub fn metric_deviation(&self) -> Result<f64> {
        let again = MetricSeries::compute(&self.wer_matrix, Some(&self.references))?;
        Ok(self.metrics.max_deviation(&again))
    }

    /// Wall-clock seconds of every new-language stage.
    pub fn stage_seconds(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.wall_secs).collect()
    }
}

/// Outcome of recomputing metrics from files in a run directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Recomputed {
    pub metrics: MetricSeries,
    /// Against `metrics.csv`, when present.
    pub deviation: Option<f64>,
}

/// Recomputes metrics from `wer_matrix.csv` found in `dir`, comparing
/// with a stored `metrics.csv`. IM and FWT are included when
/// `references.csv` and `record.json` are both present.
pub fn recompute_from_files(dir: &Path, matrix_path: Option<&Path>) -> Result<Recomputed> {
    let labels = ExperimentRecord::load(dir).ok().map(|r| r.wer_matrix.labels);
    let default_matrix = dir.join(MATRIX_FILE);
    let matrix = WerMatrix::read_csv(matrix_path.unwrap_or(&default_matrix), labels.as_deref())?;
    let refs_path = dir.join(REFERENCES_FILE);
    // references are keyed by task label, which only the record knows
    let refs = if refs_path.exists() && labels.is_some() { Some(ReferenceWers::read_csv(&refs_path)?) } else { None };
    let metrics = MetricSeries::compute(&matrix, refs.as_ref())?;
    let stored_path = dir.join(METRICS_FILE);
    let deviation = if stored_path.exists() {
        let stored = MetricSeries::from_rows(&read_metrics_csv(&stored_path)?)?;
        Some(stored.max_deviation(&metrics))
    } else {
        None
    };
    Ok(Recomputed { metrics, deviation })
}
