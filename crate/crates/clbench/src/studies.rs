//! Multi-run studies: language-order sensitivity and the effect of
//! pretraining/per-language epoch imbalance.

use log::info;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use strategies::StrategyKind;

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};
use crate::experiment::{stage_rng, Runner};
use crate::metrics::{bwt, mean_std, MetricRow, METRICS};
use crate::record::ExperimentRecord;

/// `n` shuffles of `ids`, each from its own stream under `base_seed`.
pub fn orderings(ids: &[String], n: usize, base_seed: u64) -> Vec<Vec<String>> {
    (0..n)
        .map(|k| {
            let mut order = ids.to_vec();
            order.shuffle(&mut stage_rng(base_seed, &format!("order/{k}")));
            order
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageStat {
    pub stage: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingSummary {
    pub strategy: StrategyKind,
    pub orders: Vec<Vec<String>>,
    /// Per-stage mean and sample standard deviation of each metric, as
    /// fractions, keyed `awer`, `bwt`, `im`, `fwt`.
    pub series: Vec<(String, Vec<StageStat>)>,
    /// Final-stage value of every metric for every order.
    pub finals: Vec<(String, Vec<f64>)>,
}

impl OrderingSummary {
    pub fn stat(&self, metric: &str) -> Option<&[StageStat]> {
        self.series.iter().find(|(m, _)| m == metric).map(|(_, s)| s.as_slice())
    }

    pub fn final_stat(&self, metric: &str) -> Option<StageStat> {
        self.stat(metric).and_then(|s| s.last().copied())
    }

    /// Rows for `metrics.csv`-style output, in percent, with `std`.
    pub fn to_rows(&self) -> Vec<MetricRow> {
        let stages = self.stat("awer").map_or(0, |s| s.len());
        let mut rows = Vec::new();
        for t in 1..=stages {
            for (metric, stats) in &self.series {
                if let Some(s) = stats.iter().find(|s| s.stage == t) {
                    rows.push(MetricRow { stage: t, metric: metric.clone(), value: s.mean * 100.0, std: Some(s.std * 100.0) });
                }
            }
        }
        rows
    }
}

/// Runs `cfg` once per order and aggregates the metric series.
pub fn ordering_study_with(
    runner: &mut Runner,
    cfg: &ExperimentConfig,
    orders: Vec<Vec<String>>,
) -> Result<(OrderingSummary, Vec<ExperimentRecord>)> {
    if orders.len() < 2 {
        return Err(BenchError::Config(format!("an ordering study needs at least 2 orders, got {}", orders.len())));
    }
    let mut records = Vec::with_capacity(orders.len());
    for (k, order) in orders.iter().enumerate() {
        let mut c = cfg.clone();
        c.run.order = order.clone();
        c.run.stages = None;
        info!("{} order {}/{}: {}", cfg.strategy.kind, k + 1, orders.len(), order.join(" "));
        records.push(runner.run_sequence(&c, None)?);
    }
    let stages = records[0].metrics.stages();
    let mut series = Vec::new();
    let mut finals = Vec::new();
    for metric in METRICS {
        let mut stats = Vec::new();
        for t in 1..=stages {
            let values: Vec<f64> = records.iter().filter_map(|r| r.metrics.get(metric, t)).collect();
            if values.len() == records.len() {
                let (mean, std) = mean_std(&values).expect("non-empty");
                stats.push(StageStat { stage: t, mean, std });
            }
        }
        finals.push((metric.to_string(), records.iter().filter_map(|r| r.metrics.get(metric, stages)).collect()));
        series.push((metric.to_string(), stats));
    }
    Ok((OrderingSummary { strategy: cfg.strategy.kind, orders, series, finals }, records))
}

/// [`ordering_study_with`] over `n_orders` seeded shuffles.
pub fn ordering_study(
    runner: &mut Runner,
    cfg: &ExperimentConfig,
    n_orders: usize,
    base_seed: u64,
) -> Result<(OrderingSummary, Vec<ExperimentRecord>)> {
    let orders = orderings(&cfg.new_language_ids(), n_orders, base_seed);
    ordering_study_with(runner, cfg, orders)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceRow {
    /// `balanced` when pretraining and per-language epochs match.
    pub regime: String,
    pub base_epochs: usize,
    pub epochs_per_language: usize,
    pub strategy: StrategyKind,
    /// `WER_{1,1}` and `WER_{2,1}`, as fractions.
    pub base_before: f64,
    pub base_after: f64,
    pub bwt: f64,
    /// `−BWT_2`: how much the base task got worse.
    pub drop: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceSummary {
    pub first_language: String,
    pub rows: Vec<ImbalanceRow>,
}

impl ImbalanceSummary {
    pub fn row(&self, regime: &str, strategy: StrategyKind) -> Option<&ImbalanceRow> {
        self.rows.iter().find(|r| r.regime == regime && r.strategy == strategy)
    }
}

pub fn regime_label(cfg: &ExperimentConfig) -> &'static str {
    if cfg.training.base_epochs == cfg.training.epochs_per_language {
        "balanced"
    } else {
        "imbalanced"
    }
}

/// FT and ER on the first new language, once with pretraining epochs
/// equal to the per-language epochs and once with `cfg`'s pretraining
/// epochs. Only the first stage is trained since only `BWT_2` is reported.
pub fn imbalance_study(runner: &mut Runner, cfg: &ExperimentConfig) -> Result<ImbalanceSummary> {
    let mut variants = Vec::new();
    let mut balanced = cfg.clone();
    balanced.training.base_epochs = cfg.training.epochs_per_language;
    variants.push(balanced);
    if cfg.training.base_epochs != cfg.training.epochs_per_language {
        variants.push(cfg.clone());
    }
    let first = cfg.order().first().cloned().ok_or_else(|| BenchError::Config("no new languages".into()))?;
    let mut rows = Vec::new();
    for v in &variants {
        for kind in [StrategyKind::Ft, StrategyKind::Er] {
            let mut c = v.with_strategy(kind);
            c.run.stages = Some(1);
            let out = runner.run_protocol(&c, None)?;
            let b = bwt(&out.matrix, 2)?;
            rows.push(ImbalanceRow {
                regime: regime_label(v).to_string(),
                base_epochs: v.training.base_epochs,
                epochs_per_language: v.training.epochs_per_language,
                strategy: kind,
                base_before: out.matrix.get(1, 1).unwrap_or(f64::NAN),
                base_after: out.matrix.get(2, 1).unwrap_or(f64::NAN),
                bwt: b,
                drop: -b,
            });
        }
    }
    Ok(ImbalanceSummary { first_language: first, rows })
}
