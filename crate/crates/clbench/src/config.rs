//! Experiment configuration.
//!
//! One TOML file with five sections. Every key is optional; omitted keys
//! take the defaults below, which follow the reference protocol (AdamW at
//! 1e-4, 20 pretraining epochs, 2 epochs per new language, batch 8, clip
//! norm 5, plateau decay 0.8, 10 base and 10 new languages).
//!
//! ```toml
//! [model]
//! d_model = 64
//! num_layers = 2
//! regime = "shared"          # or "per-language"
//!
//! [data]
//! seed = 0
//! n_base = 10
//! n_new = 10
//!
//! [training]
//! lr = 1e-4
//! base_epochs = 20
//! epochs_per_language = 2
//!
//! [strategy]
//! kind = "ER"
//! replay_ratio = 0.1
//!
//! [run]
//! seed = 0
//! order = []                 # new-language ids; empty keeps generation order
//! ```

use std::path::Path;

use ctcwer::Granularity;
use numkit::AdamWConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use seqmodel::{EncoderConfig, TokenRegime};
use sha2::{Digest, Sha256};
use strategies::{StrategyConfig, StrategyKind};
use synthlang::{LanguageConfig, SplitSizes, Universe};

use crate::error::{BenchError, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub data: DataSection,
    pub training: TrainingSection,
    pub strategy: StrategyConfig,
    pub run: RunSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub d_model: usize,
    pub num_layers: usize,
    pub regime: TokenRegime,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { d_model: 64, num_layers: 2, regime: TokenRegime::Shared }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub seed: u64,
    pub n_base: usize,
    pub n_new: usize,
    pub d_in: usize,
    pub shared_pool: usize,
    pub private_stride: usize,
    pub vocab_size: usize,
    pub overlap: f64,
    pub frames_per_token: (usize, usize),
    pub tokens_per_utterance: (usize, usize),
    pub max_frames: usize,
    pub noise_sigma: f64,
    pub accent: f64,
    pub bigram_sharpness: f64,
    pub min_prototype_distance: f64,
    pub granularity: Granularity,
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Default for DataSection {
    fn default() -> Self {
        Self {
            seed: 0,
            n_base: 10,
            n_new: 10,
            d_in: 16,
            shared_pool: 8,
            private_stride: 8,
            vocab_size: 8,
            overlap: 0.25,
            frames_per_token: (2, 3),
            tokens_per_utterance: (3, 8),
            max_frames: 40,
            noise_sigma: 0.5,
            accent: 0.3,
            bigram_sharpness: 1.0,
            min_prototype_distance: 1.0,
            granularity: Granularity::Word,
            train: 2000,
            val: 200,
            test: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub weight_decay: f64,
    pub base_epochs: usize,
    pub epochs_per_language: usize,
    pub batch_size: usize,
    pub clip_norm: f64,
    pub plateau_factor: f64,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let adam = AdamWConfig::default();
        Self {
            lr: 1e-4,
            beta1: adam.beta1,
            beta2: adam.beta2,
            eps: adam.eps,
            weight_decay: 0.0,
            base_epochs: 20,
            epochs_per_language: 2,
            batch_size: 8,
            clip_norm: 5.0,
            plateau_factor: 0.8,
        }
    }
}

impl TrainingSection {
    pub fn adamw(&self) -> AdamWConfig {
        AdamWConfig { lr: self.lr, beta1: self.beta1, beta2: self.beta2, eps: self.eps, weight_decay: self.weight_decay }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Drives model initialisation, shuffling and strategy sampling.
    pub seed: u64,
    /// New-language ids in training order; empty keeps generation order.
    pub order: Vec<String>,
    /// Train only the first `n` new languages of the order.
    pub stages: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| BenchError::Format { path: path.display().to_string(), reason: e.to_string() })
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        let (d, t) = (&self.data, &self.training);
        if d.n_base == 0 {
            return bad("at least one base language is required".into());
        }
        if t.batch_size == 0 {
            return bad("batch_size must be positive".into());
        }
        if t.base_epochs == 0 || t.epochs_per_language == 0 {
            return bad("epoch counts must be positive".into());
        }
        if !(t.lr > 0.0) || !t.lr.is_finite() {
            return bad(format!("lr must be positive, got {}", t.lr));
        }
        if !(t.clip_norm > 0.0) {
            return bad(format!("clip_norm must be positive, got {}", t.clip_norm));
        }
        if !(t.plateau_factor > 0.0 && t.plateau_factor <= 1.0) {
            return bad(format!("plateau_factor must be in (0, 1], got {}", t.plateau_factor));
        }
        self.encoder().validate().map_err(|e| BenchError::Config(e.to_string()))?;
        self.strategy.validate().map_err(|e| BenchError::Config(e.to_string()))?;
        if let Some(n) = self.run.stages {
            if n > d.n_new {
                return bad(format!("run.stages = {n} but only {} new languages", d.n_new));
            }
        }
        if !self.run.order.is_empty() {
            let mut want = self.new_language_ids();
            let mut got = self.run.order.clone();
            want.sort();
            got.sort();
            if want != got {
                return bad(format!("run.order must be a permutation of {:?}", self.new_language_ids()));
            }
        }
        Ok(())
    }

    pub fn base_language_ids(&self) -> Vec<String> {
        (0..self.data.n_base).map(|i| format!("b{:02}", i + 1)).collect()
    }

    pub fn new_language_ids(&self) -> Vec<String> {
        (0..self.data.n_new).map(|i| format!("n{:02}", i + 1)).collect()
    }

    /// New languages in training order, truncated to `run.stages`.
    pub fn order(&self) -> Vec<String> {
        let mut order = if self.run.order.is_empty() { self.new_language_ids() } else { self.run.order.clone() };
        if let Some(n) = self.run.stages {
            order.truncate(n);
        }
        order
    }

    pub fn universe(&self) -> Universe {
        let d = &self.data;
        Universe {
            shared_pool: d.shared_pool,
            private_stride: d.private_stride,
            n_languages: d.n_base + d.n_new,
            d_in: d.d_in,
            seed: d.seed,
        }
    }

    pub fn language(&self, id: &str, index: usize) -> LanguageConfig {
        let d = &self.data;
        LanguageConfig {
            id: id.to_string(),
            index,
            vocab_size: d.vocab_size,
            overlap: d.overlap,
            frames_per_token: d.frames_per_token,
            tokens_per_utterance: d.tokens_per_utterance,
            max_frames: d.max_frames,
            noise_sigma: d.noise_sigma,
            accent: d.accent,
            bigram_sharpness: d.bigram_sharpness,
            min_prototype_distance: d.min_prototype_distance,
            splits: SplitSizes { train: d.train, val: d.val, test: d.test },
            granularity: d.granularity,
        }
    }

    pub fn encoder(&self) -> EncoderConfig {
        EncoderConfig {
            d_in: self.data.d_in,
            d_model: self.model.d_model,
            num_layers: self.model.num_layers,
            vocab_size: self.universe().size(),
        }
    }

    pub fn with_strategy(&self, kind: StrategyKind) -> Self {
        let mut c = self.clone();
        c.strategy.kind = kind;
        c
    }

    /// SHA-256 over the canonical JSON form of the whole config.
    pub fn hash(&self) -> String {
        hash_value(&serde_json::to_value(self).expect("config serializes"))
    }

    /// Hash that checkpoints are keyed by: the config minus the stage cap,
    /// so a truncated run can later be continued.
    pub fn progress_key(&self) -> String {
        let mut c = self.clone();
        c.run.stages = None;
        c.hash()
    }

    /// Hash of everything the base model and the reference runs depend
    /// on: the config minus the strategy and the language order.
    pub fn reference_key(&self) -> String {
        let mut c = self.clone();
        c.strategy = StrategyConfig::default();
        c.run.order.clear();
        c.run.stages = None;
        c.hash()
    }
}

pub(crate) fn hash_value(v: &Value) -> String {
    let mut s = String::new();
    canonical(v, &mut s);
    let digest = Sha256::digest(s.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn canonical(v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                canonical(&map[k], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                canonical(x, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
