use numkit::{clip_grad_norm, OptimState, Tape, Var};
use rand::Rng;
use seqmodel::{AdapterConfig, AdapterKind, Model, TokenRegime};
use synthlang::Utterance;

use crate::agem::{agem_project, dot};
use crate::buffer::{ReplayBuffer, TrainItem, TrainPlan};
use crate::config::{StrategyConfig, StrategyKind};
use crate::distill::{der_term, kd_term};
use crate::error::{Result, StrategyError};
use crate::regularize::{estimate_importance, ImportanceMap, ImportanceRule};

/// Everything a strategy carries from one task to the next.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrategyState {
    pub buffer: ReplayBuffer,
    pub importance: Option<ImportanceMap>,
    /// Frozen copy of the model taken before the current task.
    pub teacher: Option<Model>,
    /// Finished stages as `(task, languages)`, in order.
    pub stages: Vec<(String, Vec<String>)>,
}

/// Forward results for one batch item, as seen by [`Strategy::loss_hook`].
#[derive(Clone, Copy, Debug)]
pub struct ItemForward<'a> {
    pub item: &'a TrainItem,
    pub hidden: Var,
    pub logits: Var,
}

#[derive(Clone, Debug)]
pub struct Strategy {
    config: StrategyConfig,
    state: StrategyState,
}

/// Outcome of one gradient update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepStats {
    pub task_loss: f64,
    pub total_loss: f64,
    /// Global gradient norm before clipping.
    pub grad_norm: f64,
    /// `g·g_ref` before and after projection when a reference was used.
    pub agem_dots: Option<(f64, f64)>,
}

fn languages_of(data: &[Utterance]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for u in data {
        if !out.iter().any(|l| l == u.lang()) {
            out.push(u.lang().to_string());
        }
    }
    out
}

impl Strategy {
    pub fn new(config: StrategyConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, state: StrategyState::default() })
    }

    pub fn with_state(config: StrategyConfig, state: StrategyState) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, state })
    }

    pub fn config(&self) -> &StrategyConfig {
        &self.config
    }

    pub fn kind(&self) -> StrategyKind {
        self.config.kind
    }

    pub fn state(&self) -> &StrategyState {
        &self.state
    }

    pub fn into_state(self) -> StrategyState {
        self.state
    }

    fn adapter_kind(&self) -> Option<AdapterKind> {
        match self.config.kind {
            StrategyKind::Pnn => Some(AdapterKind::Pnn),
            StrategyKind::Pb => Some(AdapterKind::Piggyback),
            StrategyKind::L2p => Some(AdapterKind::Prompt),
            _ => None,
        }
    }

    /// Registers `task` with the model and assembles its training set.
    pub fn prepare_task(
        &mut self,
        model: &mut Model,
        task: &str,
        vocab: &[u32],
        train: &[Utterance],
        rng: &mut impl Rng,
    ) -> Result<TrainPlan> {
        match self.adapter_kind() {
            Some(kind) => {
                let cfg = AdapterConfig {
                    mask_init: self.config.pb_init,
                    mask_threshold: self.config.pb_threshold,
                    prompt_noise: self.config.prompt_noise,
                };
                model.add_adapter(kind, task, vocab, &cfg, rng)?;
            }
            None => {
                model.register_language(task, vocab, rng)?;
                model.params_mut().unfreeze_all();
            }
        }
        let mut items: Vec<TrainItem> = train.iter().map(|u| TrainItem::current(u.clone(), task)).collect();

        if self.config.kind.mixes_data() {
            for (source, entries) in self.state.buffer.tasks() {
                for e in entries {
                    items.push(TrainItem {
                        utt: e.utt.clone(),
                        source: source.to_string(),
                        replay: true,
                        stored_logits: e.logits.clone(),
                        teacher_logits: Vec::new(),
                    });
                }
            }
        }

        if self.config.kind == StrategyKind::Lwf {
            let teacher = model.clone();
            let targets: Vec<String> = match model.regime() {
                TokenRegime::Shared => vec![task.to_string()],
                TokenRegime::PerLanguage => self.state.stages.last().map(|(_, l)| l.clone()).unwrap_or_default(),
            };
            for it in items.iter_mut() {
                for t in &targets {
                    it.teacher_logits.push((t.clone(), teacher.infer_logits(&it.utt.features, t)?));
                }
            }
            self.state.teacher = Some(teacher);
        }
        Ok(TrainPlan { task: task.to_string(), items })
    }

    /// Adds the strategy's extra terms to the batch task loss.
    pub fn loss_hook(&self, tape: &mut Tape, model: &Model, task_loss: Var, batch: &[ItemForward<'_>]) -> Result<Var> {
        let cfg = &self.config;
        match cfg.kind {
            StrategyKind::Ewc | StrategyKind::Mas => {
                let lambda = if cfg.kind == StrategyKind::Ewc { cfg.ewc_lambda } else { cfg.mas_lambda };
                let Some(map) = &self.state.importance else { return Ok(task_loss) };
                match map.penalty(tape, model.params(), lambda)? {
                    Some(p) => Ok(tape.add(task_loss, p)?),
                    None => Ok(task_loss),
                }
            }
            StrategyKind::Lwf => {
                if self.state.teacher.is_none() {
                    return Err(StrategyError::MissingTeacher("LwF"));
                }
                let mut terms = Vec::new();
                for f in batch {
                    for (t, teacher) in &f.item.teacher_logits {
                        let student = if *t == f.item.utt.lang() {
                            f.logits
                        } else {
                            model.project(tape, f.hidden, t)?
                        };
                        terms.push(kd_term(tape, student, teacher, cfg.lwf_temperature)?);
                    }
                }
                self.add_mean(tape, task_loss, &terms, cfg.lwf_lambda)
            }
            StrategyKind::Der => {
                let mut terms = Vec::new();
                for f in batch.iter().filter(|f| f.item.replay) {
                    let stored = f.item.stored_logits.as_ref().ok_or(StrategyError::MissingTeacher("DER"))?;
                    terms.push(der_term(tape, f.logits, stored)?);
                }
                self.add_mean(tape, task_loss, &terms, cfg.der_alpha)
            }
            _ => Ok(task_loss),
        }
    }

    fn add_mean(&self, tape: &mut Tape, base: Var, terms: &[Var], weight: f64) -> Result<Var> {
        let Some((&first, rest)) = terms.split_first() else { return Ok(base) };
        let mut acc = first;
        for &t in rest {
            acc = tape.add(acc, t)?;
        }
        let scaled = tape.scale(acc, weight / terms.len() as f64);
        Ok(tape.add(base, scaled)?)
    }

    /// Flat gradient of the mean task loss over `n` buffer samples, or
    /// `None` when the strategy does not project or the buffer is empty.
    pub fn reference_gradient(&self, model: &Model, n: usize, rng: &mut impl Rng) -> Result<Option<Vec<f64>>> {
        if self.config.kind != StrategyKind::Agem || self.state.buffer.is_empty() {
            return Ok(None);
        }
        let picks = self.state.buffer.sample(n, rng);
        let mut scratch = model.params().clone();
        scratch.zero_grads();
        let mut tape = Tape::new();
        let mut losses = Vec::with_capacity(picks.len());
        for e in &picks {
            losses.push(model.loss(&mut tape, &e.utt.features, &e.utt.transcript)?.0);
        }
        let mut total = losses[0];
        for &l in &losses[1..] {
            total = tape.add(total, l)?;
        }
        let mean = tape.scale(total, 1.0 / losses.len() as f64);
        tape.backward(mean, &mut scratch)?;
        Ok(Some(scratch.flat_grads()))
    }

    /// Re-estimates parameter importance on `data` and resets the anchor.
    pub fn update_importance(&mut self, model: &Model, data: &[Utterance]) -> Result<()> {
        let (rule, alpha) = match self.config.kind {
            StrategyKind::Ewc => (ImportanceRule::SquaredGrad, self.config.ewc_alpha),
            StrategyKind::Mas => (ImportanceRule::AbsGrad, self.config.mas_alpha),
            k => return Err(StrategyError::NotRegularizing(k.name())),
        };
        let fresh = estimate_importance(model.params(), data, rule, |tape, u: &Utterance| {
            Ok(match rule {
                ImportanceRule::SquaredGrad => model.loss(tape, &u.features, &u.transcript)?.0,
                ImportanceRule::AbsGrad => {
                    let z = model.logits(tape, &u.features, u.lang())?;
                    let sq = tape.square(z);
                    tape.sum(sq)
                }
            })
        })?;
        self.state.importance.get_or_insert_with(ImportanceMap::default).update(fresh, alpha, model.params())
    }

    /// Closes a stage: fills the buffer, refreshes importance, freezes
    /// adapters. `train` is the finished task's own training data.
    pub fn finalize_task(&mut self, model: &mut Model, task: &str, train: &[Utterance], rng: &mut impl Rng) -> Result<()> {
        let kind = self.config.kind;
        if kind.keeps_buffer() {
            let entries = self.state.buffer.retain(task, train, self.config.replay_ratio, rng);
            if kind == StrategyKind::Der {
                for e in entries.iter_mut() {
                    e.logits = Some(model.infer_logits(&e.utt.features, e.utt.lang())?);
                }
            }
        }
        if kind.is_regularizing() {
            self.update_importance(model, train)?;
        }
        if kind == StrategyKind::Lwf {
            self.state.teacher = None;
        }
        if kind.is_architectural() && model.adapter(task).is_some() {
            model.finalize_adapter(task)?;
        }
        self.state.stages.push((task.to_string(), languages_of(train)));
        Ok(())
    }

    /// One optimizer update on `batch`: task loss, strategy terms,
    /// backward, optional projection, clipping, AdamW.
    pub fn train_batch(
        &self,
        model: &mut Model,
        batch: &[&TrainItem],
        opt: &mut OptimState,
        clip_norm: f64,
        rng: &mut impl Rng,
    ) -> Result<StepStats> {
        let mut tape = Tape::new();
        let mut fwd = Vec::with_capacity(batch.len());
        let mut losses = Vec::with_capacity(batch.len());
        for item in batch {
            let lang = item.utt.lang();
            let hidden = model.hidden(&mut tape, &item.utt.features, lang)?;
            let logits = model.project(&mut tape, hidden, lang)?;
            losses.push(model.ctc(&mut tape, logits, &item.utt.transcript)?);
            fwd.push(ItemForward { item, hidden, logits });
        }
        let mut sum = losses[0];
        for &l in &losses[1..] {
            sum = tape.add(sum, l)?;
        }
        let task_loss = tape.scale(sum, 1.0 / losses.len() as f64);
        let total = self.loss_hook(&mut tape, model, task_loss, &fwd)?;
        let total_value = tape.value(total).item();
        if !total_value.is_finite() {
            return Err(StrategyError::NonFinite(total_value));
        }
        model.params_mut().zero_grads();
        tape.backward(total, model.params_mut())?;

        let mut agem_dots = None;
        if let Some(g_ref) = self.reference_gradient(model, batch.len(), rng)? {
            let g = model.params().flat_grads();
            let projected = agem_project(&g, &g_ref);
            agem_dots = Some((dot(&g, &g_ref), dot(&projected, &g_ref)));
            model.params_mut().set_flat_grads(&projected)?;
        }
        let grad_norm = clip_grad_norm(model.params_mut(), clip_norm);
        opt.step(model.params_mut());
        Ok(StepStats { task_loss: tape.value(task_loss).item(), total_loss: total_value, grad_norm, agem_dots })
    }
}
