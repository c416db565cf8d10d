//! On-disk strategy state.
//!
//! `strategy.ckpt` is a parameter archive whose JSON metadata describes
//! the buffer, importance map and finished stages, and whose entries hold
//! the tensors (`buf/<task>/<i>/x`, `buf/<task>/<i>/z`, `omega/<param>`,
//! `anchor/<param>`). A teacher, when present, is a model checkpoint in
//! `teacher.ckpt`.

use std::path::Path;

use ctcwer::TokenSeq;
use indexmap::IndexMap;
use numkit::{Checkpoint, ParamStore};
use seqmodel::Model;
use serde::{Deserialize, Serialize};
use synthlang::Utterance;

use crate::buffer::{BufferEntry, ReplayBuffer};
use crate::config::StrategyConfig;
use crate::error::{Result, StrategyError};
use crate::regularize::ImportanceMap;
use crate::strategy::StrategyState;

pub const STATE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct EntryMeta {
    id: String,
    lang: String,
    tokens: Vec<u32>,
    logits: bool,
}

#[derive(Serialize, Deserialize)]
struct ImportanceMeta {
    tasks: usize,
    params: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct StateMeta {
    version: u32,
    config: StrategyConfig,
    stages: Vec<(String, Vec<String>)>,
    buffer: IndexMap<String, Vec<EntryMeta>>,
    importance: Option<ImportanceMeta>,
}

pub fn encode_state(config: &StrategyConfig, state: &StrategyState) -> Result<(Checkpoint, Option<Checkpoint>)> {
    let mut store = ParamStore::new();
    let mut buffer = IndexMap::new();
    for (task, entries) in state.buffer.tasks() {
        let mut metas = Vec::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            store.insert(format!("buf/{task}/{i}/x"), e.utt.features.clone_values())?;
            if let Some(z) = &e.logits {
                store.insert(format!("buf/{task}/{i}/z"), z.clone_values())?;
            }
            metas.push(EntryMeta {
                id: e.utt.id.clone(),
                lang: e.utt.lang().to_string(),
                tokens: e.utt.transcript.tokens.clone(),
                logits: e.logits.is_some(),
            });
        }
        buffer.insert(task.to_string(), metas);
    }
    let importance = match &state.importance {
        Some(m) => {
            for (name, o) in &m.omega {
                store.insert(format!("omega/{name}"), o.clone_values())?;
                let a = m.anchor.get(name).ok_or_else(|| StrategyError::State(format!("no anchor for `{name}`")))?;
                store.insert(format!("anchor/{name}"), a.clone_values())?;
            }
            Some(ImportanceMeta { tasks: m.tasks, params: m.omega.keys().cloned().collect() })
        }
        None => None,
    };
    let meta = StateMeta { version: STATE_VERSION, config: *config, stages: state.stages.clone(), buffer, importance };
    let ck = Checkpoint::from_store(&store, serde_json::to_value(meta)?)?;
    let teacher = state.teacher.as_ref().map(Model::snapshot).transpose()?;
    Ok((ck, teacher))
}

pub fn decode_state(ck: &Checkpoint, teacher: Option<&Checkpoint>) -> Result<(StrategyConfig, StrategyState)> {
    let meta: StateMeta = serde_json::from_value(ck.meta()?)?;
    if meta.version != STATE_VERSION {
        return Err(StrategyError::State(format!("unsupported state version {}", meta.version)));
    }
    let mut store = ck.to_store()?;
    let mut take = |name: String| -> Result<numkit::Tensor> {
        store.remove(&name).map(|p| p.value).map_err(|_| StrategyError::State(format!("missing tensor `{name}`")))
    };
    let mut buffer = ReplayBuffer::new();
    for (task, metas) in meta.buffer {
        let mut entries = Vec::with_capacity(metas.len());
        for (i, m) in metas.into_iter().enumerate() {
            let features = take(format!("buf/{task}/{i}/x"))?;
            let logits = if m.logits { Some(take(format!("buf/{task}/{i}/z"))?) } else { None };
            let utt = Utterance { id: m.id, features, transcript: TokenSeq { tokens: m.tokens, lang: m.lang } };
            entries.push(BufferEntry { utt, logits });
        }
        buffer.insert(&task, entries);
    }
    let importance = match meta.importance {
        Some(im) => {
            let mut map = ImportanceMap { tasks: im.tasks, ..Default::default() };
            for name in im.params {
                map.omega.insert(name.clone(), take(format!("omega/{name}"))?);
                map.anchor.insert(name.clone(), take(format!("anchor/{name}"))?);
            }
            Some(map)
        }
        None => None,
    };
    let teacher = teacher.map(Model::from_checkpoint).transpose()?;
    meta.config.validate()?;
    Ok((meta.config, StrategyState { buffer, importance, teacher, stages: meta.stages }))
}

pub fn save_state(dir: &Path, config: &StrategyConfig, state: &StrategyState) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let (ck, teacher) = encode_state(config, state)?;
    ck.save(&dir.join("strategy.ckpt"))?;
    let tpath = dir.join("teacher.ckpt");
    match teacher {
        Some(t) => t.save(&tpath)?,
        None if tpath.exists() => std::fs::remove_file(tpath)?,
        None => {}
    }
    Ok(())
}

pub fn load_state(dir: &Path) -> Result<(StrategyConfig, StrategyState)> {
    let ck = Checkpoint::load(&dir.join("strategy.ckpt"))?;
    let tpath = dir.join("teacher.ckpt");
    let teacher = if tpath.exists() { Some(Checkpoint::load(&tpath)?) } else { None };
    decode_state(&ck, teacher.as_ref())
}
