//! Stage training loop and evaluation.

use std::time::Instant;

use ctcwer::{score, WerScore};
use numkit::{OptimState, Tape};
use rand::seq::SliceRandom;
use rand::Rng;
use seqmodel::Model;
use serde::{Deserialize, Serialize};
use strategies::{Strategy, StrategyError, TrainItem, TrainPlan};
use synthlang::{TaskSpec, Utterance};

use crate::config::TrainingSection;
use crate::error::{BenchError, Result};

/// What happened during one stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageLog {
    pub task: String,
    pub epochs: usize,
    pub steps: usize,
    pub train_items: usize,
    /// Mean validation loss after each epoch.
    pub val_loss: Vec<f64>,
    pub final_lr: f64,
    /// Smallest `g·g_ref` seen after projection, when projecting.
    pub min_projected_dot: Option<f64>,
    pub projected_steps: usize,
    pub wall_secs: f64,
}

/// Mean CTC loss of `model` over `data`.
pub fn mean_loss(model: &Model, data: &[Utterance]) -> Result<f64> {
    if data.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for u in data {
        let mut tape = Tape::new();
        let (loss, _) = model.loss(&mut tape, &u.features, &u.transcript)?;
        total += tape.value(loss).item();
    }
    Ok(total / data.len() as f64)
}

/// Trains on `plan` for `epochs`, with a fresh optimizer, per-epoch
/// shuffling, gradient clipping and plateau decay on `val`.
pub fn train_stage(
    model: &mut Model,
    strategy: &Strategy,
    plan: &TrainPlan,
    val: &[Utterance],
    epochs: usize,
    cfg: &TrainingSection,
    rng: &mut impl Rng,
) -> Result<StageLog> {
    let start = Instant::now();
    let mut opt = OptimState::new(cfg.adamw())?;
    let mut log = StageLog { task: plan.task.clone(), epochs, train_items: plan.len(), ..Default::default() };
    let diverged = |source: StrategyError| BenchError::Divergence { stage: plan.task.clone(), source };
    let mut order: Vec<usize> = (0..plan.len()).collect();
    for _ in 0..epochs {
        order.shuffle(rng);
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<&TrainItem> = chunk.iter().map(|&k| &plan.items[k]).collect();
            let stats = strategy.train_batch(model, &batch, &mut opt, cfg.clip_norm, rng).map_err(diverged)?;
            if let Some((before, after)) = stats.agem_dots {
                log.min_projected_dot = Some(log.min_projected_dot.map_or(after, |m: f64| m.min(after)));
                if before < 0.0 {
                    log.projected_steps += 1;
                }
            }
            log.steps += 1;
        }
        let v = mean_loss(model, val)?;
        if !v.is_finite() {
            return Err(diverged(StrategyError::NonFinite(v)));
        }
        log.val_loss.push(v);
        opt.plateau_decay(v, cfg.plateau_factor);
    }
    log.final_lr = opt.lr();
    log.wall_secs = start.elapsed().as_secs_f64();
    Ok(log)
}

/// Corpus-level WER (as a fraction) of `model` decoding `data` as `task`.
pub fn evaluate(model: &Model, task: &str, spec: &TaskSpec, data: &[Utterance]) -> Result<f64> {
    let mut total = WerScore::default();
    for u in data {
        let hyp = model.transcribe(&u.features, task)?;
        total += score(&u.transcript, &hyp, spec.granularity, spec.boundaries())?;
    }
    Ok(total.rate()?)
}
