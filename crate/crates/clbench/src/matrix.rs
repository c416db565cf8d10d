//! WER matrix and reference WERs with their CSV forms.
//!
//! Values are fractions in memory and percentages on disk.
//!
//! `wer_matrix.csv`: header `t,i,wer`, one row per defined entry in
//! row-major order, 1-based indices, `wer` in percent.
//!
//! `references.csv`: header `i,task,joint,solo`, one row per task; `solo`
//! is empty for the base task.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const BASE_TASK: &str = "base";

/// Lower-triangular `WER_{t,i}`; index 1 is the joint base task.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WerMatrix {
    pub labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl WerMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the row for stage `t = len + 1`, labelled `task`, holding
    /// WERs on tasks `1..=t`.
    pub fn push_row(&mut self, task: &str, row: Vec<f64>) -> Result<()> {
        let t = self.rows.len() + 1;
        if row.len() != t {
            return Err(BenchError::Metric { metric: "matrix", t, reason: format!("row has {} entries", row.len()) });
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(BenchError::Metric { metric: "matrix", t, reason: format!("entry {bad} is not a rate") });
        }
        self.labels.push(task.to_string());
        self.rows.push(row);
        Ok(())
    }

    pub fn stages(&self) -> usize {
        self.rows.len()
    }

    /// `WER_{t,i}`, 1-based.
    pub fn get(&self, t: usize, i: usize) -> Option<f64> {
        if i == 0 || i > t {
            return None;
        }
        self.rows.get(t.checked_sub(1)?).map(|r| r[i - 1])
    }

    pub fn row(&self, t: usize) -> Option<&[f64]> {
        self.rows.get(t.checked_sub(1)?).map(Vec::as_slice)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "i", "wer"])?;
        for (t, row) in self.rows.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                w.write_record([(t + 1).to_string(), (i + 1).to_string(), (v * 100.0).to_string()])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
        write_atomic(path, &bytes)
    }

    /// Reads a matrix written by [`WerMatrix::write_csv`]. Labels are
    /// restored from `labels` when given, else numbered.
    pub fn read_csv(path: &Path, labels: Option<&[String]>) -> Result<Self> {
        let fail = |reason: String| BenchError::Format { path: path.display().to_string(), reason };
        let mut r = csv::Reader::from_path(path)?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let field = |k: usize| rec.get(k).ok_or_else(|| fail(format!("row {}: missing column {k}", line + 2)));
            let t: usize = field(0)?.parse().map_err(|e| fail(format!("row {}: {e}", line + 2)))?;
            let i: usize = field(1)?.parse().map_err(|e| fail(format!("row {}: {e}", line + 2)))?;
            let v: f64 = field(2)?.parse().map_err(|e| fail(format!("row {}: {e}", line + 2)))?;
            if t == rows.len() + 1 && i == 1 {
                rows.push(Vec::with_capacity(t));
            }
            let n = rows.len();
            match rows.last_mut() {
                Some(row) if t == n && i == row.len() + 1 => row.push(v / 100.0),
                _ => return Err(fail(format!("row {}: entry ({t},{i}) out of order", line + 2))),
            }
        }
        let mut m = WerMatrix::new();
        for (k, row) in rows.into_iter().enumerate() {
            let label = match labels.and_then(|l| l.get(k)) {
                Some(l) => l.clone(),
                None if k == 0 => BASE_TASK.to_string(),
                None => format!("task{}", k + 1),
            };
            m.push_row(&label, row).map_err(|e| fail(e.to_string()))?;
        }
        Ok(m)
    }
}

/// Joint and solo reference WERs per task, as fractions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReferenceWers {
    /// `(task, WER^joint)` for the base task and every new task.
    pub joint: Vec<(String, f64)>,
    /// `(task, WER^fine-tuned)` for every new task.
    pub solo: Vec<(String, f64)>,
    /// Epochs each reference run trained for.
    pub budget: ReferenceBudget,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceBudget {
    pub joint_epochs: usize,
    pub solo_epochs: usize,
}

impl ReferenceWers {
    pub fn joint(&self, task: &str) -> Option<f64> {
        self.joint.iter().find(|(t, _)| t == task).map(|(_, v)| *v)
    }

    pub fn solo(&self, task: &str) -> Option<f64> {
        self.solo.iter().find(|(t, _)| t == task).map(|(_, v)| *v)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["i", "task", "joint", "solo"])?;
        for (k, (task, joint)) in self.joint.iter().enumerate() {
            let solo = self.solo(task).map(|v| (v * 100.0).to_string()).unwrap_or_default();
            w.write_record([(k + 1).to_string(), task.clone(), (joint * 100.0).to_string(), solo])?;
        }
        let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
        write_atomic(path, &bytes)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let fail = |reason: String| BenchError::Format { path: path.display().to_string(), reason };
        let mut r = csv::Reader::from_path(path)?;
        let mut out = ReferenceWers::default();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let task = rec.get(1).ok_or_else(|| fail(format!("row {}: missing task", line + 2)))?.to_string();
            let parse = |k: usize| -> Result<Option<f64>> {
                match rec.get(k).unwrap_or("") {
                    "" => Ok(None),
                    s => s.parse::<f64>().map(|v| Some(v / 100.0)).map_err(|e| fail(format!("row {}: {e}", line + 2))),
                }
            };
            let joint = parse(2)?.ok_or_else(|| fail(format!("row {}: missing joint WER", line + 2)))?;
            if let Some(solo) = parse(3)? {
                out.solo.push((task.clone(), solo));
            }
            out.joint.push((task, joint));
        }
        Ok(out)
    }
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> WerMatrix {
        let mut m = WerMatrix::new();
        m.push_row("base", vec![0.1]).unwrap();
        m.push_row("n01", vec![0.5, 0.3]).unwrap();
        m.push_row("n02", vec![0.6, 0.4, 1.2]).unwrap();
        m
    }

    #[test]
    fn lower_triangular_access() {
        let m = sample();
        assert_eq!(m.get(2, 1), Some(0.5));
        assert_eq!(m.get(2, 3), None);
        assert_eq!(m.get(4, 1), None);
        assert_eq!(m.get(1, 0), None);
    }

    #[test]
    fn rejects_bad_rows() {
        let mut m = sample();
        assert!(m.push_row("x", vec![0.1]).is_err());
        assert!(m.push_row("x", vec![0.1, 0.1, 0.1, -0.2]).is_err());
    }

    #[test]
    fn csv_round_trip_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("wer_matrix.csv");
        let m = sample();
        m.write_csv(&p).unwrap();
        let back = WerMatrix::read_csv(&p, Some(&m.labels)).unwrap();
        for t in 1..=3 {
            for i in 1..=t {
                assert!((back.get(t, i).unwrap() - m.get(t, i).unwrap()).abs() < 1e-15);
            }
        }
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("t,i,wer\n1,1,10\n2,1,50\n"));
    }

    #[test]
    fn out_of_order_rows_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        std::fs::write(&p, "t,i,wer\n1,1,10\n2,2,5\n").unwrap();
        let err = WerMatrix::read_csv(&p, None).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
    }

    #[test]
    fn references_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("references.csv");
        let r = ReferenceWers {
            joint: vec![("base".into(), 0.2), ("n01".into(), 0.25)],
            solo: vec![("n01".into(), 0.28)],
            budget: ReferenceBudget::default(),
        };
        r.write_csv(&p).unwrap();
        let back = ReferenceWers::read_csv(&p).unwrap();
        assert!((back.joint("n01").unwrap() - 0.25).abs() < 1e-15);
        assert!((back.solo("n01").unwrap() - 0.28).abs() < 1e-15);
        assert_eq!(back.solo("base"), None);
    }
}
