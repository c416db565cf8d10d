use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use ctcwer::{greedy_decode, TokenSeq, BLANK};
use indexmap::IndexMap;
use numkit::{Checkpoint, ParamStore, Tape, Tensor, Var};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{AdapterConfig, EncoderConfig, TokenRegime};
use crate::error::{ModelError, Result};

/// Output projection for one task.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskHead {
    pub task: String,
    pub weight: String,
    pub bias: String,
    /// Global token behind logit column `k + 1`. `None` means column `k`
    /// is token `k` (union vocabulary).
    pub vocab: Option<Vec<u32>>,
    /// Row of `weight` used as the language token embedding.
    pub lang_row: Option<usize>,
}

impl TaskHead {
    pub fn column_of(&self, token: u32) -> Option<usize> {
        if token == BLANK {
            return None;
        }
        match &self.vocab {
            None => Some(token as usize),
            Some(v) => v.binary_search(&token).ok().map(|i| i + 1),
        }
    }

    pub fn token_of(&self, column: usize) -> u32 {
        match &self.vocab {
            None => column as u32,
            Some(_) if column == 0 => BLANK,
            Some(v) => v.get(column - 1).copied().unwrap_or(column as u32),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdapterKind {
    /// A task-specific recurrent column over the frozen encoder output.
    Pnn,
    /// Learned binary masks over frozen weights.
    Piggyback,
    /// A `d_model × d_model` matrix post-multiplying the encoder output.
    Prompt,
}

/// Binary mask over one frozen parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskSpec {
    pub target: String,
    /// Name of the real-valued weights while training.
    pub real: String,
    pub threshold: f64,
    /// Packed mask (one bit per weight, LSB first), set at finalize.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adapter {
    pub task: String,
    pub kind: AdapterKind,
    pub head: TaskHead,
    /// Parameters owned by this adapter.
    pub params: Vec<String>,
    pub masks: Vec<MaskSpec>,
    pub finalized: bool,
    #[serde(skip)]
    unpacked: Vec<Tensor>,
}

impl Adapter {
    fn prefix(&self) -> String {
        prefix(self.kind, &self.task)
    }
}

fn prefix(kind: AdapterKind, task: &str) -> String {
    match kind {
        AdapterKind::Pnn => format!("pnn.{task}"),
        AdapterKind::Piggyback => format!("pb.{task}"),
        AdapterKind::Prompt => format!("l2p.{task}"),
    }
}

pub fn pack_mask(mask: &Tensor) -> String {
    let mut bytes = vec![0u8; mask.len().div_ceil(8)];
    for (i, &v) in mask.data().iter().enumerate() {
        if v != 0.0 {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    B64.encode(bytes)
}

pub fn unpack_mask(bits: &str, shape: &[usize]) -> Result<Tensor> {
    let bytes = B64.decode(bits).map_err(|e| ModelError::Mismatch(format!("mask bits: {e}")))?;
    let n: usize = shape.iter().product();
    if bytes.len() != n.div_ceil(8) {
        return Err(ModelError::Mismatch(format!("mask has {} bytes for {n} weights", bytes.len())));
    }
    Ok(Tensor::from_fn(shape, |i| if bytes[i / 8] >> (i % 8) & 1 == 1 { 1.0 } else { 0.0 }))
}

fn xavier(rng: &mut impl Rng, rows: usize, cols: usize) -> Tensor {
    let a = (6.0 / (rows + cols) as f64).sqrt();
    Tensor::from_fn(&[rows, cols], |_| rng.gen_range(-a..a))
}

fn recurrent(rng: &mut impl Rng, h: usize) -> Tensor {
    let a = 1.0 / (h as f64).sqrt();
    Tensor::from_fn(&[h, h], |_| rng.gen_range(-a..a))
}

#[derive(Serialize, Deserialize)]
struct Registry {
    config: EncoderConfig,
    regime: TokenRegime,
    lang_rows: IndexMap<String, usize>,
    heads: IndexMap<String, TaskHead>,
    adapters: IndexMap<String, Adapter>,
}

/// Recurrent frame encoder with task heads and per-task adapters.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    config: EncoderConfig,
    regime: TokenRegime,
    params: ParamStore,
    lang_rows: IndexMap<String, usize>,
    heads: IndexMap<String, TaskHead>,
    adapters: IndexMap<String, Adapter>,
}

pub const SHARED_WEIGHT: &str = "head.w";
pub const SHARED_BIAS: &str = "head.b";

fn layer_names(i: usize) -> [String; 3] {
    [format!("enc.l{i}.w_in"), format!("enc.l{i}.w_rec"), format!("enc.l{i}.b")]
}

impl Model {
    pub fn new(config: EncoderConfig, regime: TokenRegime, rng: &mut impl Rng) -> Result<Self> {
        config.validate()?;
        let d = config.d_model;
        let mut params = ParamStore::new();
        for i in 0..config.num_layers {
            let fan_in = if i == 0 { config.d_in } else { d };
            let [w_in, w_rec, b] = layer_names(i);
            params.insert(w_in, xavier(rng, fan_in, d))?;
            params.insert(w_rec, recurrent(rng, d))?;
            params.insert(b, Tensor::zeros(&[1, d]))?;
        }
        if regime == TokenRegime::Shared {
            params.insert(SHARED_WEIGHT, xavier(rng, config.vocab_size, d))?;
            params.insert(SHARED_BIAS, Tensor::zeros(&[1, config.vocab_size]))?;
        }
        Ok(Self {
            config,
            regime,
            params,
            lang_rows: IndexMap::new(),
            heads: IndexMap::new(),
            adapters: IndexMap::new(),
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn regime(&self) -> TokenRegime {
        self.regime
    }

    pub fn params(&self) -> &ParamStore {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamStore {
        &mut self.params
    }

    pub fn encoder_param_names(&self) -> Vec<String> {
        (0..self.config.num_layers).flat_map(layer_names).collect()
    }

    pub fn has_task(&self, task: &str) -> bool {
        self.lang_rows.contains_key(task) || self.heads.contains_key(task) || self.adapters.contains_key(task)
    }

    /// Tasks in registration order.
    pub fn tasks(&self) -> Vec<&str> {
        self.lang_rows.keys().chain(self.heads.keys()).chain(self.adapters.keys()).map(String::as_str).collect()
    }

    pub fn adapter(&self, task: &str) -> Option<&Adapter> {
        self.adapters.get(task)
    }

    /// Number of output columns for `task`.
    pub fn output_width(&self, task: &str) -> Result<usize> {
        Ok(self.params.value(&self.head(task)?.weight)?.rows())
    }

    fn ensure_new(&self, task: &str) -> Result<()> {
        if self.has_task(task) {
            return Err(ModelError::DuplicateTask(task.to_string()));
        }
        Ok(())
    }

    /// Appends a language token row to the shared head and makes the whole
    /// head trainable.
    pub fn add_language_token(&mut self, task: &str, rng: &mut impl Rng) -> Result<usize> {
        if self.regime != TokenRegime::Shared {
            return Err(ModelError::Regime { needed: "shared" });
        }
        self.ensure_new(task)?;
        let d = self.config.d_model;
        let row = self.params.value(SHARED_WEIGHT)?.rows();
        let init = xavier(rng, row + 1, d);
        self.params.get_mut(SHARED_WEIGHT)?.value.append_rows(init.row_slice(0))?;
        self.params.get_mut(SHARED_BIAS)?.value.append_cols(&[0.0])?;
        self.params.set_frozen(SHARED_WEIGHT, false)?;
        self.params.set_frozen(SHARED_BIAS, false)?;
        self.lang_rows.insert(task.to_string(), row);
        Ok(row)
    }

    fn fresh_head(&mut self, task: &str, weight: String, bias: String, vocab: &[u32], rng: &mut impl Rng) -> Result<TaskHead> {
        let mut v = vocab.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.len() != vocab.len() || v.is_empty() || v.contains(&BLANK) || v.iter().any(|&t| t as usize >= self.config.vocab_size) {
            return Err(ModelError::Invalid(format!("bad vocabulary for `{task}`")));
        }
        self.params.insert(weight.clone(), xavier(rng, v.len() + 1, self.config.d_model))?;
        self.params.insert(bias.clone(), Tensor::zeros(&[1, v.len() + 1]))?;
        Ok(TaskHead { task: task.into(), weight, bias, vocab: Some(v), lang_row: None })
    }

    /// Adds a dedicated head over `vocab` (per-language regime only).
    pub fn add_language_head(&mut self, task: &str, vocab: &[u32], rng: &mut impl Rng) -> Result<()> {
        if self.regime != TokenRegime::PerLanguage {
            return Err(ModelError::Regime { needed: "per-language" });
        }
        self.ensure_new(task)?;
        let head = self.fresh_head(task, format!("head.{task}.w"), format!("head.{task}.b"), vocab, rng)?;
        self.heads.insert(task.to_string(), head);
        Ok(())
    }

    /// Registers a task in whichever way the regime calls for.
    pub fn register_language(&mut self, task: &str, vocab: &[u32], rng: &mut impl Rng) -> Result<()> {
        match self.regime {
            TokenRegime::Shared => self.add_language_token(task, rng).map(|_| ()),
            TokenRegime::PerLanguage => self.add_language_head(task, vocab, rng),
        }
    }

    /// Creates an adapter for a new task and freezes everything that
    /// existed before. `vocab` is used in the per-language regime.
    pub fn add_adapter(
        &mut self,
        kind: AdapterKind,
        task: &str,
        vocab: &[u32],
        cfg: &AdapterConfig,
        rng: &mut impl Rng,
    ) -> Result<()> {
        self.ensure_new(task)?;
        if kind == AdapterKind::Piggyback && !(cfg.mask_init > cfg.mask_threshold) {
            return Err(ModelError::Invalid("mask init must start above the threshold".into()));
        }
        self.params.freeze_all();
        let p = prefix(kind, task);
        let d = self.config.d_model;
        let (hw, hb) = (format!("{p}.head.w"), format!("{p}.head.b"));
        let head = match self.regime {
            TokenRegime::Shared => {
                let mut w = self.params.value(SHARED_WEIGHT)?.clone_values();
                let mut b = self.params.value(SHARED_BIAS)?.clone_values();
                let row = w.rows();
                w.append_rows(xavier(rng, row + 1, d).row_slice(0))?;
                b.append_cols(&[0.0])?;
                self.params.insert(hw.clone(), w)?;
                self.params.insert(hb.clone(), b)?;
                // the language row is the only new input; a cloned head
                // stays fixed unless the adapter itself is a fresh column
                if kind != AdapterKind::Pnn {
                    self.params.set_frozen(&hw, true)?;
                    self.params.set_frozen(&hb, true)?;
                }
                TaskHead { task: task.into(), weight: hw.clone(), bias: hb.clone(), vocab: None, lang_row: Some(row) }
            }
            TokenRegime::PerLanguage => self.fresh_head(task, hw.clone(), hb.clone(), vocab, rng)?,
        };
        let mut owned = vec![hw.clone(), hb.clone()];
        let mut masks = Vec::new();
        match kind {
            AdapterKind::Pnn => {
                let names = [format!("{p}.col.w_in"), format!("{p}.col.w_rec"), format!("{p}.col.b"), format!("{p}.proj")];
                self.params.insert(names[0].clone(), xavier(rng, d, d))?;
                self.params.insert(names[1].clone(), recurrent(rng, d))?;
                self.params.insert(names[2].clone(), Tensor::zeros(&[1, d]))?;
                self.params.insert(names[3].clone(), xavier(rng, d, d))?;
                owned.extend(names);
            }
            AdapterKind::Prompt => {
                let noise = cfg.prompt_noise;
                let mut prompt = Tensor::identity(d);
                if noise > 0.0 {
                    prompt.data_mut().iter_mut().for_each(|v| *v += rng.gen_range(-noise..noise));
                }
                self.params.insert(format!("{p}.prompt"), prompt)?;
                owned.push(format!("{p}.prompt"));
            }
            AdapterKind::Piggyback => {
                let last = self.config.num_layers - 1;
                let [w_in, w_rec, _] = layer_names(last);
                let mut targets = vec![w_in, w_rec];
                if self.regime == TokenRegime::Shared {
                    targets.push(hw.clone());
                }
                for (k, target) in targets.into_iter().enumerate() {
                    let shape = self.params.value(&target)?.shape().to_vec();
                    let real = format!("{p}.mask{k}");
                    self.params.insert(real.clone(), Tensor::full(&shape, cfg.mask_init))?;
                    owned.push(real.clone());
                    masks.push(MaskSpec { target, real, threshold: cfg.mask_threshold, bits: None });
                }
            }
        }
        self.adapters.insert(
            task.to_string(),
            Adapter { task: task.into(), kind, head, params: owned, masks, finalized: false, unpacked: Vec::new() },
        );
        Ok(())
    }

    /// Freezes an adapter. Masks are reduced to their bits and the real
    /// weights are dropped.
    pub fn finalize_adapter(&mut self, task: &str) -> Result<()> {
        let adapter = self.adapters.get_mut(task).ok_or_else(|| ModelError::UnknownTask(task.into()))?;
        if adapter.finalized {
            return Ok(());
        }
        let mut unpacked = Vec::with_capacity(adapter.masks.len());
        for m in &mut adapter.masks {
            let real = self.params.remove(&m.real)?.value;
            let thr = m.threshold;
            let mask = real.map(|x| if x > thr { 1.0 } else { 0.0 });
            m.bits = Some(pack_mask(&mask));
            unpacked.push(mask);
        }
        let reals: Vec<String> = adapter.masks.iter().map(|m| m.real.clone()).collect();
        adapter.params.retain(|n| !reals.contains(n));
        adapter.unpacked = unpacked;
        adapter.finalized = true;
        for name in adapter.params.clone() {
            self.params.set_frozen(&name, true)?;
        }
        Ok(())
    }

    /// Current binary mask of each masked parameter of `task`.
    pub fn masks(&self, task: &str) -> Result<Vec<(String, Tensor)>> {
        let a = self.adapters.get(task).ok_or_else(|| ModelError::UnknownTask(task.into()))?;
        a.masks
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let mask = if a.finalized {
                    a.unpacked[k].clone()
                } else {
                    let thr = m.threshold;
                    self.params.value(&m.real)?.map(|x| if x > thr { 1.0 } else { 0.0 })
                };
                Ok((m.target.clone(), mask))
            })
            .collect()
    }

    pub fn head(&self, task: &str) -> Result<TaskHead> {
        if let Some(a) = self.adapters.get(task) {
            return Ok(a.head.clone());
        }
        match self.regime {
            TokenRegime::Shared => {
                let row = *self.lang_rows.get(task).ok_or_else(|| ModelError::UnknownTask(task.into()))?;
                Ok(TaskHead {
                    task: task.into(),
                    weight: SHARED_WEIGHT.into(),
                    bias: SHARED_BIAS.into(),
                    vocab: None,
                    lang_row: Some(row),
                })
            }
            TokenRegime::PerLanguage => {
                self.heads.get(task).cloned().ok_or_else(|| ModelError::UnknownTask(task.into()))
            }
        }
    }

    fn weight(&self, tape: &mut Tape, name: &str, adapter: Option<&Adapter>) -> Result<Var> {
        let base = tape.param(&self.params, name)?;
        let Some(a) = adapter else { return Ok(base) };
        let Some(k) = a.masks.iter().position(|m| m.target == name) else { return Ok(base) };
        let mask = if a.finalized {
            tape.constant(a.unpacked[k].clone())
        } else {
            let real = tape.param(&self.params, &a.masks[k].real)?;
            tape.threshold_ste(real, a.masks[k].threshold)
        };
        Ok(tape.mul(base, mask)?)
    }

    /// Encoder output for `task`, adapter applied, before the language token.
    pub fn hidden(&self, tape: &mut Tape, features: &Tensor, task: &str) -> Result<Var> {
        if features.rows() == 0 {
            return Err(ModelError::EmptyInput);
        }
        if features.shape() != [features.rows(), self.config.d_in] {
            return Err(ModelError::Invalid(format!(
                "features have shape {:?}, expected T×{}",
                features.shape(),
                self.config.d_in
            )));
        }
        if !self.has_task(task) {
            return Err(ModelError::UnknownTask(task.into()));
        }
        let adapter = self.adapters.get(task);
        let mut h = tape.constant(features.clone_values());
        for i in 0..self.config.num_layers {
            let [w_in, w_rec, b] = layer_names(i);
            let w_in = self.weight(tape, &w_in, adapter)?;
            let w_rec = self.weight(tape, &w_rec, adapter)?;
            let b = tape.param(&self.params, &b)?;
            h = tape.rnn_tanh(h, w_in, w_rec, b)?;
        }
        if let Some(a) = adapter {
            let p = a.prefix();
            match a.kind {
                AdapterKind::Pnn => {
                    let w_in = tape.param(&self.params, &format!("{p}.col.w_in"))?;
                    let w_rec = tape.param(&self.params, &format!("{p}.col.w_rec"))?;
                    let b = tape.param(&self.params, &format!("{p}.col.b"))?;
                    let c = tape.rnn_tanh(h, w_in, w_rec, b)?;
                    let proj = tape.param(&self.params, &format!("{p}.proj"))?;
                    h = tape.matmul(c, proj)?;
                }
                AdapterKind::Prompt => {
                    let prompt = tape.param(&self.params, &format!("{p}.prompt"))?;
                    h = tape.matmul(h, prompt)?;
                }
                AdapterKind::Piggyback => {}
            }
        }
        Ok(h)
    }

    /// Applies the task head (with its language token, if any) to `hidden`.
    pub fn project(&self, tape: &mut Tape, hidden: Var, task: &str) -> Result<Var> {
        let head = self.head(task)?;
        let w = self.weight(tape, &head.weight, self.adapters.get(task))?;
        let b = tape.param(&self.params, &head.bias)?;
        let h = match head.lang_row {
            Some(row) => {
                let e = tape.narrow(w, 0, row, 1)?;
                tape.add_row(hidden, e)?
            }
            None => hidden,
        };
        let z = tape.matmul_nt(h, w)?;
        Ok(tape.add_row(z, b)?)
    }

    /// Unnormalized per-frame scores, `T × output_width(task)`.
    pub fn logits(&self, tape: &mut Tape, features: &Tensor, task: &str) -> Result<Var> {
        let h = self.hidden(tape, features, task)?;
        self.project(tape, h, task)
    }

    /// Maps a transcript onto logit columns of its task head.
    pub fn target_columns(&self, target: &TokenSeq) -> Result<Vec<u32>> {
        let head = self.head(&target.lang)?;
        let width = self.params.value(&head.weight)?.rows();
        target
            .tokens
            .iter()
            .map(|&t| match head.column_of(t) {
                Some(c) if c < width => Ok(c as u32),
                _ => Err(ModelError::VocabMismatch { task: target.lang.clone(), token: t }),
            })
            .collect()
    }

    /// CTC loss of `target` given logits from [`Model::logits`].
    pub fn ctc(&self, tape: &mut Tape, logits: Var, target: &TokenSeq) -> Result<Var> {
        let cols = TokenSeq { tokens: self.target_columns(target)?, lang: target.lang.clone() };
        let lp = tape.log_softmax(logits)?;
        Ok(ctcwer::ctc_loss(tape, lp, &cols)?)
    }

    /// Forward pass plus CTC; returns `(loss, logits)`.
    pub fn loss(&self, tape: &mut Tape, features: &Tensor, target: &TokenSeq) -> Result<(Var, Var)> {
        let logits = self.logits(tape, features, &target.lang)?;
        let loss = self.ctc(tape, logits, target)?;
        Ok((loss, logits))
    }

    pub fn infer_logits(&self, features: &Tensor, task: &str) -> Result<Tensor> {
        let mut tape = Tape::new();
        let z = self.logits(&mut tape, features, task)?;
        Ok(tape.value(z).clone_values())
    }

    /// Greedy transcription with the task's language token forced.
    pub fn transcribe(&self, features: &Tensor, task: &str) -> Result<TokenSeq> {
        let logits = self.infer_logits(features, task)?;
        let head = self.head(task)?;
        let cols = greedy_decode(&logits, task);
        Ok(TokenSeq { tokens: cols.tokens.iter().map(|&c| head.token_of(c as usize)).collect(), lang: task.into() })
    }

    pub fn snapshot(&self) -> Result<Checkpoint> {
        let reg = Registry {
            config: self.config,
            regime: self.regime,
            lang_rows: self.lang_rows.clone(),
            heads: self.heads.clone(),
            adapters: self.adapters.clone(),
        };
        Ok(Checkpoint::from_store(&self.params, serde_json::to_value(reg)?)?)
    }

    pub fn from_checkpoint(ck: &Checkpoint) -> Result<Self> {
        let reg: Registry = serde_json::from_value(ck.meta()?)?;
        reg.config.validate()?;
        let params = ck.to_store()?;
        let mut model = Self {
            config: reg.config,
            regime: reg.regime,
            params,
            lang_rows: reg.lang_rows,
            heads: reg.heads,
            adapters: reg.adapters,
        };
        model.check_layout()?;
        for a in model.adapters.values_mut() {
            if !a.finalized {
                continue;
            }
            let mut unpacked = Vec::with_capacity(a.masks.len());
            for m in &a.masks {
                let bits = m.bits.as_deref().ok_or_else(|| ModelError::Mismatch(format!("mask `{}` has no bits", m.real)))?;
                unpacked.push(unpack_mask(bits, model.params.value(&m.target)?.shape())?);
            }
            a.unpacked = unpacked;
        }
        Ok(model)
    }

    /// Replaces this model with the checkpoint's, which must share its
    /// config and regime.
    pub fn restore(&mut self, ck: &Checkpoint) -> Result<()> {
        let m = Self::from_checkpoint(ck)?;
        if m.config != self.config || m.regime != self.regime {
            return Err(ModelError::Mismatch(format!(
                "checkpoint is {:?}/{}, model is {:?}/{}",
                m.config,
                m.regime.name(),
                self.config,
                self.regime.name()
            )));
        }
        *self = m;
        Ok(())
    }

    fn check_layout(&self) -> Result<()> {
        let d = self.config.d_model;
        let expect = |name: &str, shape: &[usize]| -> Result<()> {
            let got = self.params.value(name).map_err(|_| ModelError::Mismatch(format!("missing `{name}`")))?;
            if got.shape() != shape {
                return Err(ModelError::Mismatch(format!("`{name}` has shape {:?}, expected {shape:?}", got.shape())));
            }
            Ok(())
        };
        for i in 0..self.config.num_layers {
            let [w_in, w_rec, b] = layer_names(i);
            expect(&w_in, &[if i == 0 { self.config.d_in } else { d }, d])?;
            expect(&w_rec, &[d, d])?;
            expect(&b, &[1, d])?;
        }
        if self.regime == TokenRegime::Shared {
            let rows = self.config.vocab_size + self.lang_rows.len();
            expect(SHARED_WEIGHT, &[rows, d])?;
            expect(SHARED_BIAS, &[1, rows])?;
        }
        for h in self.heads.values().chain(self.adapters.values().map(|a| &a.head)) {
            let w = self.params.value(&h.weight).map_err(|_| ModelError::Mismatch(format!("missing `{}`", h.weight)))?;
            expect(&h.bias, &[1, w.rows()])?;
        }
        Ok(())
    }
}
