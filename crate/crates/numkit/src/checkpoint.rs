//! Versioned parameter archive.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic       8 bytes  "NKCKPT\0\0"
//! version     u32
//! index_len   u64
//! index       index_len bytes of JSON (entries + optional metadata)
//! blob        concatenated f64 values, one run per entry
//! ```
//!
//! Each index entry carries the SHA-256 of its value bytes so damaged
//! archives are reported against the entry that is actually broken.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{NumError, Result};
use crate::params::ParamStore;
use crate::tensor::Tensor;

pub const MAGIC: &[u8; 8] = b"NKCKPT\0\0";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryIndex {
    pub name: String,
    pub shape: Vec<usize>,
    pub frozen: bool,
    /// Offset into the blob, in bytes.
    pub offset: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Index {
    version: u32,
    entries: Vec<EntryIndex>,
    #[serde(default)]
    meta: serde_json::Value,
}

/// Serialized parameter store plus free-form JSON metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    bytes: Vec<u8>,
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Checkpoint {
    pub fn from_store(store: &ParamStore, meta: serde_json::Value) -> Result<Self> {
        let mut blob = Vec::new();
        let mut entries = Vec::with_capacity(store.len());
        for (name, p) in store.iter() {
            let start = blob.len();
            for v in p.value.data() {
                blob.extend_from_slice(&v.to_le_bytes());
            }
            entries.push(EntryIndex {
                name: name.to_string(),
                shape: p.value.shape().to_vec(),
                frozen: p.frozen,
                offset: start as u64,
                sha256: digest(&blob[start..]),
            });
        }
        let index = serde_json::to_vec(&Index { version: FORMAT_VERSION, entries, meta })?;
        let mut bytes = Vec::with_capacity(20 + index.len() + blob.len());
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        bytes.extend_from_slice(&(index.len() as u64).to_le_bytes());
        bytes.extend_from_slice(&index);
        bytes.extend_from_slice(&blob);
        Ok(Self { bytes })
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let ck = Self { bytes };
        ck.parse()?;
        Ok(ck)
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    fn parse(&self) -> Result<(Index, &[u8])> {
        let b = &self.bytes;
        if b.len() < 20 || &b[..8] != MAGIC {
            return Err(NumError::Checkpoint("missing magic header".into()));
        }
        let version = u32::from_le_bytes(b[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(NumError::Checkpoint(format!("unsupported format version {version}")));
        }
        let index_len = u64::from_le_bytes(b[12..20].try_into().unwrap()) as usize;
        let index_end = 20usize
            .checked_add(index_len)
            .filter(|&e| e <= b.len())
            .ok_or_else(|| NumError::Checkpoint("truncated index".into()))?;
        let index: Index = serde_json::from_slice(&b[20..index_end])
            .map_err(|e| NumError::Checkpoint(format!("bad index: {e}")))?;
        Ok((index, &b[index_end..]))
    }

    pub fn meta(&self) -> Result<serde_json::Value> {
        Ok(self.parse()?.0.meta)
    }

    pub fn entries(&self) -> Result<Vec<EntryIndex>> {
        Ok(self.parse()?.0.entries)
    }

    /// Rebuilds the store, verifying every entry.
    pub fn to_store(&self) -> Result<ParamStore> {
        let (index, blob) = self.parse()?;
        let mut store = ParamStore::new();
        for e in &index.entries {
            let corrupt = |reason: &str| NumError::CorruptEntry { name: e.name.clone(), reason: reason.into() };
            let n: usize = e.shape.iter().product();
            let start = e.offset as usize;
            let end = start.checked_add(n * 8).ok_or_else(|| corrupt("size overflow"))?;
            if end > blob.len() {
                return Err(corrupt("data runs past end of archive"));
            }
            let raw = &blob[start..end];
            if digest(raw) != e.sha256 {
                return Err(corrupt("checksum mismatch"));
            }
            let data = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
            let t = Tensor::new(e.shape.clone(), data).map_err(|_| corrupt("invalid shape"))?;
            store.insert(e.name.clone(), t).map_err(|_| corrupt("duplicate name"))?;
            store.set_frozen(&e.name, e.frozen)?;
        }
        Ok(store)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, &self.bytes)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(std::fs::read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ParamStore {
        let mut s = ParamStore::new();
        s.insert("enc.w", Tensor::from_fn(&[2, 3], |i| i as f64 * 0.25 - 1.0)).unwrap();
        s.insert("head.b", Tensor::row(vec![f64::MIN_POSITIVE, -0.0, 7.5]).unwrap()).unwrap();
        s.set_frozen("enc.w", true).unwrap();
        s
    }

    #[test]
    fn round_trip_is_bitwise() {
        let s = sample();
        let meta = serde_json::json!({"kind": "test"});
        let a = Checkpoint::from_store(&s, meta.clone()).unwrap();
        let restored = a.to_store().unwrap();
        assert_eq!(restored, s);
        assert!(restored.get("enc.w").unwrap().frozen);
        let b = Checkpoint::from_store(&restored, meta.clone()).unwrap();
        assert_eq!(a.bytes(), b.bytes());
        assert_eq!(b.meta().unwrap(), meta);
    }

    #[test]
    fn corrupt_entry_is_named() {
        let ck = Checkpoint::from_store(&sample(), serde_json::Value::Null).unwrap();
        let mut bytes = ck.into_bytes();
        let last = bytes.len() - 1;
        bytes[last] ^= 0xff;
        let err = Checkpoint::from_bytes(bytes).unwrap().to_store().unwrap_err();
        match err {
            NumError::CorruptEntry { name, .. } => assert_eq!(name, "head.b"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bad_magic_and_truncation() {
        assert!(Checkpoint::from_bytes(b"garbage".to_vec()).is_err());
        let ck = Checkpoint::from_store(&sample(), serde_json::Value::Null).unwrap();
        let mut bytes = ck.into_bytes();
        bytes.truncate(bytes.len() - 4);
        assert!(Checkpoint::from_bytes(bytes).unwrap().to_store().is_err());
    }
}
