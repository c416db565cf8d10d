//! The staged protocol: joint base pretraining, then one stage per new
//! language, evaluating every task seen so far after each stage.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::info;
use numkit::Checkpoint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqmodel::Model;
use serde::{Deserialize, Serialize};
use strategies::{load_state, retained_count, save_state, Strategy, StrategyConfig, StrategyKind, TrainItem, TrainPlan};
use synthlang::{derive_seed, Split, Utterance};

use crate::config::{hash_value, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::matrix::{write_atomic, ReferenceBudget, ReferenceWers, WerMatrix, BASE_TASK};
use crate::metrics::MetricSeries;
use crate::record::{ExperimentRecord, Seeds, FORMAT_VERSION};
use crate::suite::Suite;
use crate::train::{evaluate, train_stage, StageLog};

/// Stream for `label` under the run seed.
pub fn stage_rng(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label))
}

/// The protocol's outcome before reference runs are attached.
#[derive(Clone, Debug)]
pub struct SequenceOutcome {
    pub matrix: WerMatrix,
    pub base: StageLog,
    pub stages: Vec<StageLog>,
    pub model: Model,
    pub strategy: Strategy,
}

#[derive(Serialize, Deserialize)]
struct Progress {
    config_hash: String,
    matrix: WerMatrix,
    stages: Vec<StageLog>,
}

/// Runs experiments, caching generated suites, trained base models and
/// reference WERs by config hash, in memory and optionally on disk.
#[derive(Default)]
pub struct Runner {
    cache_dir: Option<PathBuf>,
    suites: HashMap<String, Arc<Suite>>,
    bases: HashMap<String, (Model, StageLog)>,
    refs: HashMap<String, ReferenceWers>,
}

impl Runner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Persists base models and references under `dir`.
    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> Self {
        Self { cache_dir: Some(dir.into()), ..Self::default() }
    }

    pub fn suite(&mut self, cfg: &ExperimentConfig) -> Result<Arc<Suite>> {
        let key = hash_value(&serde_json::to_value(&cfg.data)?);
        if let Some(s) = self.suites.get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(Suite::generate(cfg)?);
        self.suites.insert(key, s.clone());
        Ok(s)
    }

    fn cache_path(&self, name: String) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(name))
    }

    /// The jointly pretrained base model, shared by every strategy.
    pub fn base_model(&mut self, cfg: &ExperimentConfig) -> Result<(Model, StageLog)> {
        let key = cfg.reference_key();
        if let Some(b) = self.bases.get(&key) {
            return Ok(b.clone());
        }
        let ck_path = self.cache_path(format!("base-{key}.ckpt"));
        let log_path = self.cache_path(format!("base-{key}.json"));
        if let (Some(ck), Some(lp)) = (&ck_path, &log_path) {
            if ck.exists() && lp.exists() {
                let model = Model::from_checkpoint(&Checkpoint::load(ck)?)?;
                let log: StageLog = serde_json::from_slice(&std::fs::read(lp)?)?;
                self.bases.insert(key, (model.clone(), log.clone()));
                return Ok((model, log));
            }
        }
        let suite = self.suite(cfg)?;
        let out = train_base(cfg, &suite)?;
        if let (Some(ck), Some(lp)) = (&ck_path, &log_path) {
            if let Some(dir) = ck.parent() {
                std::fs::create_dir_all(dir)?;
            }
            out.0.snapshot()?.save(ck)?;
            write_atomic(lp, &serde_json::to_vec_pretty(&out.1)?)?;
        }
        self.bases.insert(key, out.clone());
        Ok(out)
    }

    /// Joint and solo reference WERs for `cfg`'s suite and budget.
    pub fn references(&mut self, cfg: &ExperimentConfig) -> Result<ReferenceWers> {
        let key = cfg.reference_key();
        if let Some(r) = self.refs.get(&key) {
            return Ok(r.clone());
        }
        let path = self.cache_path(format!("refs-{key}.json"));
        if let Some(p) = path.as_ref().filter(|p| p.exists()) {
            let r: ReferenceWers = serde_json::from_slice(&std::fs::read(p)?)?;
            self.refs.insert(key, r.clone());
            return Ok(r);
        }
        let suite = self.suite(cfg)?;
        let (base, _) = self.base_model(cfg)?;
        let r = compute_references(cfg, &suite, &base)?;
        if let Some(p) = &path {
            write_atomic(p, &serde_json::to_vec_pretty(&r)?)?;
        }
        self.refs.insert(key, r.clone());
        Ok(r)
    }

    /// The staged protocol without reference runs.
    ///
    /// With `checkpoints`, the model, strategy state and matrix are saved
    /// after every stage and a matching earlier run is resumed.
    pub fn run_protocol(&mut self, cfg: &ExperimentConfig, checkpoints: Option<&Path>) -> Result<SequenceOutcome> {
        cfg.validate()?;
        let suite = self.suite(cfg)?;
        let (base_model, base_log) = self.base_model(cfg)?;
        let seed = cfg.run.seed;
        let order = cfg.order();
        let hash = cfg.progress_key();

        let resumed = checkpoints.map(|d| resume(d, &hash)).transpose()?.flatten();
        let (mut model, mut strategy, mut matrix, mut stages) = match resumed {
            // a checkpoint past the requested stage cap is not reused
            Some(state) if state.2.stages() <= order.len() + 1 => state,
            _ => {
                let mut model = base_model;
                let mut strategy = Strategy::new(cfg.strategy)?;
                let mut rng = stage_rng(seed, "finalize/base");
                strategy.finalize_task(&mut model, BASE_TASK, &suite.base_split(Split::Train), &mut rng)?;
                let mut matrix = WerMatrix::new();
                matrix.push_row(BASE_TASK, evaluate_row(&model, &suite, &[])?)?;
                (model, strategy, matrix, Vec::new())
            }
        };
        if matrix.stages() > 1 {
            info!("resuming {} after stage {}", cfg.strategy.kind, matrix.stages());
        }

        for k in matrix.stages() - 1..order.len() {
            let lang = &order[k];
            let data = suite.language(lang)?;
            let mut rng = stage_rng(seed, &format!("stage/{lang}"));
            let plan = strategy.prepare_task(&mut model, lang, &data.spec.vocab, &data.train, &mut rng)?;
            let val = validation_set(cfg, &suite, &order[..k], lang)?;
            let log = train_stage(&mut model, &strategy, &plan, &val, cfg.training.epochs_per_language, &cfg.training, &mut rng)?;
            strategy.finalize_task(&mut model, lang, &data.train, &mut rng)?;
            matrix.push_row(lang, evaluate_row(&model, &suite, &order[..=k])?)?;
            info!(
                "{} stage {}/{} `{lang}`: {} steps, WER_tt {:.2}%, {:.1}s",
                cfg.strategy.kind,
                k + 1,
                order.len(),
                log.steps,
                matrix.get(k + 2, k + 2).unwrap_or(f64::NAN) * 100.0,
                log.wall_secs
            );
            stages.push(log);
            if let Some(dir) = checkpoints {
                save_progress(dir, &hash, &model, &strategy, &matrix, &stages)?;
            }
        }
        Ok(SequenceOutcome { matrix, base: base_log, stages, model, strategy })
    }

    /// Protocol plus references and metrics, as one record.
    pub fn run_sequence(&mut self, cfg: &ExperimentConfig, checkpoints: Option<&Path>) -> Result<ExperimentRecord> {
        let out = self.run_protocol(cfg, checkpoints)?;
        let refs = self.references(cfg)?;
        let mut warnings = Vec::new();
        let epochs = cfg.training.epochs_per_language;
        if refs.budget.joint_epochs != epochs || refs.budget.solo_epochs != epochs {
            warnings.push(format!(
                "reference budget (joint {}, solo {} epochs) differs from main run ({epochs} epochs per language)",
                refs.budget.joint_epochs, refs.budget.solo_epochs
            ));
        }
        let metrics = MetricSeries::compute(&out.matrix, Some(&refs))?;
        Ok(ExperimentRecord {
            format_version: FORMAT_VERSION,
            config_hash: cfg.hash(),
            strategy: cfg.strategy.kind,
            order: cfg.order(),
            seeds: Seeds { data: cfg.data.seed, run: cfg.run.seed },
            config: cfg.clone(),
            wer_matrix: out.matrix,
            references: refs,
            metrics,
            base: out.base,
            stages: out.stages,
            warnings,
        })
    }
}

fn ft() -> Result<Strategy> {
    Ok(Strategy::new(StrategyConfig::new(StrategyKind::Ft))?)
}

fn plan_of(task: &str, data: impl IntoIterator<Item = Utterance>) -> TrainPlan {
    TrainPlan { task: task.to_string(), items: data.into_iter().map(|u| TrainItem::current(u, task)).collect() }
}

fn train_base(cfg: &ExperimentConfig, suite: &Suite) -> Result<(Model, StageLog)> {
    let seed = cfg.run.seed;
    let mut rng = stage_rng(seed, "init");
    let mut model = Model::new(cfg.encoder(), cfg.model.regime, &mut rng)?;
    for (id, lang) in &suite.base {
        model.register_language(id, &lang.spec.vocab, &mut rng)?;
    }
    let plan = plan_of(BASE_TASK, suite.base_split(Split::Train));
    let mut rng = stage_rng(seed, "stage/base");
    let log = train_stage(
        &mut model,
        &ft()?,
        &plan,
        &suite.base_split(Split::Val),
        cfg.training.base_epochs,
        &cfg.training,
        &mut rng,
    )?;
    info!("base model: {} steps, {:.1}s", log.steps, log.wall_secs);
    Ok((model, log))
}

/// WER on the base task (mean over base languages) and on each of
/// `learned`, in that order.
pub fn evaluate_row(model: &Model, suite: &Suite, learned: &[String]) -> Result<Vec<f64>> {
    let mut base = 0.0;
    for (id, lang) in &suite.base {
        base += evaluate(model, id, &lang.spec, &lang.test)?;
    }
    let mut row = vec![base / suite.base.len() as f64];
    for id in learned {
        let lang = suite.language(id)?;
        row.push(evaluate(model, id, &lang.spec, &lang.test)?);
    }
    Ok(row)
}

/// Plateau-decay validation data: the current language, plus for
/// data-mixing strategies the replay share of every earlier task.
fn validation_set(cfg: &ExperimentConfig, suite: &Suite, past: &[String], current: &str) -> Result<Vec<Utterance>> {
    let mut val = suite.language(current)?.val.clone();
    if cfg.strategy.kind.mixes_data() {
        let ratio = cfg.strategy.replay_ratio;
        for lang in suite.base.values() {
            val.extend(lang.val.iter().take(retained_count(lang.val.len(), ratio)).cloned());
        }
        for id in past {
            let v = &suite.language(id)?.val;
            val.extend(v.iter().take(retained_count(v.len(), ratio)).cloned());
        }
    }
    Ok(val)
}

pub(crate) fn compute_references(cfg: &ExperimentConfig, suite: &Suite, base: &Model) -> Result<ReferenceWers> {
    let seed = cfg.run.seed;
    let epochs = cfg.training.epochs_per_language;
    let ids: Vec<String> = suite.new.keys().cloned().collect();

    let mut joint = base.clone();
    let mut rng = stage_rng(seed, "joint");
    for (id, lang) in &suite.new {
        joint.register_language(id, &lang.spec.vocab, &mut rng)?;
    }
    let mut train = suite.base_split(Split::Train);
    let mut val = suite.base_split(Split::Val);
    for lang in suite.new.values() {
        train.extend(lang.train.iter().cloned());
        val.extend(lang.val.iter().cloned());
    }
    let plan = plan_of("joint", train);
    let log = train_stage(&mut joint, &ft()?, &plan, &val, epochs, &cfg.training, &mut rng)?;
    info!("joint reference: {} steps, {:.1}s", log.steps, log.wall_secs);
    let row = evaluate_row(&joint, suite, &ids)?;
    let mut refs = ReferenceWers {
        joint: std::iter::once(BASE_TASK.to_string()).chain(ids.iter().cloned()).zip(row).collect(),
        solo: Vec::new(),
        budget: ReferenceBudget { joint_epochs: epochs, solo_epochs: epochs },
    };

    // Identical to the first stage of a fine-tuning run on `id`.
    for (id, lang) in &suite.new {
        let mut model = base.clone();
        let mut strategy = ft()?;
        let mut rng = stage_rng(seed, &format!("stage/{id}"));
        let plan = strategy.prepare_task(&mut model, id, &lang.spec.vocab, &lang.train, &mut rng)?;
        train_stage(&mut model, &strategy, &plan, &lang.val, epochs, &cfg.training, &mut rng)?;
        refs.solo.push((id.clone(), evaluate(&model, id, &lang.spec, &lang.test)?));
    }
    Ok(refs)
}

fn save_progress(
    dir: &Path,
    hash: &str,
    model: &Model,
    strategy: &Strategy,
    matrix: &WerMatrix,
    stages: &[StageLog],
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    model.snapshot()?.save(&dir.join("model.ckpt"))?;
    save_state(&dir.join("strategy"), strategy.config(), strategy.state())?;
    let p = Progress { config_hash: hash.to_string(), matrix: matrix.clone(), stages: stages.to_vec() };
    write_atomic(&dir.join("progress.json"), &serde_json::to_vec_pretty(&p)?)
}

type Resumed = (Model, Strategy, WerMatrix, Vec<StageLog>);

fn resume(dir: &Path, hash: &str) -> Result<Option<Resumed>> {
    let path = dir.join("progress.json");
    if !path.exists() {
        return Ok(None);
    }
    let p: Progress = serde_json::from_slice(&std::fs::read(&path)?)?;
    if p.config_hash != hash {
        return Err(BenchError::Config(format!(
            "{} holds checkpoints of a different config; remove it or choose another output directory",
            dir.display()
        )));
    }
    let model = Model::from_checkpoint(&Checkpoint::load(&dir.join("model.ckpt"))?)?;
    let (config, state) = load_state(&dir.join("strategy"))?;
    Ok(Some((model, Strategy::with_state(config, state)?, p.matrix, p.stages)))
}
