//! JSON-lines manifests and binary feature files.
//!
//! Each manifest line is one utterance:
//!
//! ```text
//! {"id":"xx-train-00000","lang":"xx","feats":"feats/xx-train-00000.bin","tokens":[4,1,9],"frames":7}
//! ```
//!
//! `feats` is either a path (relative to the manifest's directory) or an
//! inline `frames × d_in` array. Feature files hold the magic `SLFEAT01`,
//! `d_in` and `frames` as little-endian `u32`, then row-major `f64` values.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ctcwer::{TokenSeq, BLANK};
use numkit::Tensor;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SynthError};
use crate::language::Utterance;

pub const FEAT_MAGIC: &[u8; 8] = b"SLFEAT01";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Feats {
    Path(String),
    Inline(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub lang: String,
    pub feats: Feats,
    pub tokens: Vec<u32>,
    pub frames: usize,
}

/// Validation applied while reading.
#[derive(Clone, Debug, Default)]
pub struct ManifestRules {
    /// Allowed tokens per language; languages absent here are rejected.
    pub vocab: BTreeMap<String, BTreeSet<u32>>,
    pub max_frames: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub records: Vec<ManifestRecord>,
    /// Directory that relative feature paths resolve against.
    pub root: PathBuf,
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Materializes every record, loading feature files as needed.
    pub fn utterances(&self) -> Result<Vec<Utterance>> {
        self.records
            .iter()
            .map(|r| {
                let features = match &r.feats {
                    Feats::Inline(rows) => inline_tensor(rows)?,
                    Feats::Path(p) => read_features(&self.root.join(p))?,
                };
                if features.rows() != r.frames {
                    return Err(SynthError::Features(format!(
                        "{}: manifest says {} frames, features have {}",
                        r.id,
                        r.frames,
                        features.rows()
                    )));
                }
                Ok(Utterance {
                    id: r.id.clone(),
                    features,
                    transcript: TokenSeq { tokens: r.tokens.clone(), lang: r.lang.clone() },
                })
            })
            .collect()
    }
}

fn inline_tensor(rows: &[Vec<f64>]) -> Result<Tensor> {
    let d = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(SynthError::Features("inline features must be a non-empty rectangular array".into()));
    }
    Ok(Tensor::matrix(rows.len(), d, rows.concat())?)
}

fn check_record(r: &ManifestRecord, rules: &ManifestRules) -> std::result::Result<(), String> {
    let vocab = rules.vocab.get(&r.lang).ok_or_else(|| format!("unknown language `{}`", r.lang))?;
    if let Some(&t) = r.tokens.iter().find(|&&t| t == BLANK || !vocab.contains(&t)) {
        return Err(format!("token {t} is not in the vocabulary of `{}`", r.lang));
    }
    if r.frames == 0 {
        return Err("zero frames".into());
    }
    if let Some(max) = rules.max_frames {
        if r.frames > max {
            return Err(format!("{} frames exceeds the cap of {max}", r.frames));
        }
    }
    if let Feats::Inline(rows) = &r.feats {
        if rows.len() != r.frames {
            return Err(format!("inline features have {} frames, record says {}", rows.len(), r.frames));
        }
    }
    Ok(())
}

/// Reads and validates a manifest. Errors carry the 1-based line number.
pub fn read_manifest(path: &Path, rules: &ManifestRules) -> Result<Manifest> {
    let file = std::fs::File::open(path)?;
    let mut records = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fail = |reason: String| SynthError::Manifest { line: i + 1, reason };
        let rec: ManifestRecord = serde_json::from_str(&line).map_err(|e| fail(e.to_string()))?;
        check_record(&rec, rules).map_err(fail)?;
        if !ids.insert(rec.id.clone()) {
            return Err(fail(format!("duplicate id `{}`", rec.id)));
        }
        records.push(rec);
    }
    let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Manifest { records, root })
}

pub fn write_manifest(path: &Path, records: &[ManifestRecord]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_features(path: &Path, features: &Tensor) -> Result<()> {
    let (frames, d) = features.dims2().ok_or_else(|| SynthError::Features("features must be a matrix".into()))?;
    let mut bytes = Vec::with_capacity(16 + features.len() * 8);
    bytes.extend_from_slice(FEAT_MAGIC);
    bytes.extend_from_slice(&(d as u32).to_le_bytes());
    bytes.extend_from_slice(&(frames as u32).to_le_bytes());
    for v in features.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_features(path: &Path) -> Result<Tensor> {
    let b = std::fs::read(path)?;
    let bad = |m: &str| SynthError::Features(format!("{}: {m}", path.display()));
    if b.len() < 16 || &b[..8] != FEAT_MAGIC {
        return Err(bad("missing magic header"));
    }
    let d = u32::from_le_bytes(b[8..12].try_into().unwrap()) as usize;
    let frames = u32::from_le_bytes(b[12..16].try_into().unwrap()) as usize;
    if b.len() != 16 + d * frames * 8 {
        return Err(bad("length does not match header"));
    }
    let data = b[16..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Tensor::matrix(frames, d, data).map_err(|_| bad("invalid dimensions"))
}

/// Writes utterances as feature files under `dir/feats/` plus `dir/<name>.jsonl`.
pub fn export_split(dir: &Path, name: &str, utts: &[Utterance]) -> Result<PathBuf> {
    let feats_dir = dir.join("feats");
    std::fs::create_dir_all(&feats_dir)?;
    let mut records = Vec::with_capacity(utts.len());
    for u in utts {
        let rel = format!("feats/{}.bin", u.id);
        write_features(&dir.join(&rel), &u.features)?;
        records.push(ManifestRecord {
            id: u.id.clone(),
            lang: u.lang().to_string(),
            feats: Feats::Path(rel),
            tokens: u.transcript.tokens.clone(),
            frames: u.frames(),
        });
    }
    let path = dir.join(format!("{name}.jsonl"));
    write_manifest(&path, &records)?;
    Ok(path)
}
