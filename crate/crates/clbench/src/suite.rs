//! The generated language suite for one config.

use indexmap::IndexMap;
use synthlang::{gen_language, Split, TaskSpec, Utterance};

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};

/// One language with its three splits materialised.
#[derive(Clone, Debug)]
pub struct LanguageData {
    pub spec: TaskSpec,
    pub train: Vec<Utterance>,
    pub val: Vec<Utterance>,
    pub test: Vec<Utterance>,
}

impl LanguageData {
    pub fn split(&self, split: Split) -> &[Utterance] {
        match split {
            Split::Train => &self.train,
            Split::Val => &self.val,
            Split::Test => &self.test,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub base: IndexMap<String, LanguageData>,
    pub new: IndexMap<String, LanguageData>,
}

impl Suite {
    pub fn generate(cfg: &ExperimentConfig) -> Result<Self> {
        let universe = cfg.universe();
        let mut index = 0;
        let mut build = |ids: Vec<String>| -> Result<IndexMap<String, LanguageData>> {
            let mut out = IndexMap::new();
            for id in ids {
                let spec = gen_language(&universe, &cfg.language(&id, index), cfg.data.seed)?;
                index += 1;
                let data = LanguageData {
                    train: spec.generate(Split::Train),
                    val: spec.generate(Split::Val),
                    test: spec.generate(Split::Test),
                    spec,
                };
                out.insert(id, data);
            }
            Ok(out)
        };
        let base = build(cfg.base_language_ids())?;
        let new = build(cfg.new_language_ids())?;
        Ok(Self { base, new })
    }

    pub fn language(&self, id: &str) -> Result<&LanguageData> {
        self.base
            .get(id)
            .or_else(|| self.new.get(id))
            .ok_or_else(|| BenchError::Config(format!("unknown language `{id}`")))
    }

    /// Concatenated split of all base languages.
    pub fn base_split(&self, split: Split) -> Vec<Utterance> {
        self.base.values().flat_map(|l| l.split(split).iter().cloned()).collect()
    }
}
