//! AWER, BWT, IM and FWT over a [`WerMatrix`].
//!
//! All functions are unit-agnostic: feed fractions, get fractions.
//!
//! `metrics.csv`: header `stage,metric,value,std`, one row per defined
//! `(stage, metric)` in stage order then `awer, bwt, im, fwt`; values in
//! percent; `std` empty unless the series is an aggregate over runs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::matrix::{write_atomic, ReferenceWers, WerMatrix};

pub const METRICS: [&str; 4] = ["awer", "bwt", "im", "fwt"];

fn undefined(metric: &'static str, t: usize, reason: impl Into<String>) -> BenchError {
    BenchError::Metric { metric, t, reason: reason.into() }
}

fn entry(m: &WerMatrix, metric: &'static str, t: usize, i: usize) -> Result<f64> {
    m.get(t, i).ok_or_else(|| undefined(metric, t, format!("WER_{{{t},{i}}} is undefined")))
}

/// `(1/t)·Σ_{i≤t} WER_{t,i}`.
pub fn awer(m: &WerMatrix, t: usize) -> Result<f64> {
    if t == 0 {
        return Err(undefined("awer", t, "stages are 1-based"));
    }
    let mut s = 0.0;
    for i in 1..=t {
        s += entry(m, "awer", t, i)?;
    }
    Ok(s / t as f64)
}

/// `(1/(t−1))·Σ_{i<t} (WER_{i,i} − WER_{t,i})`; negative means forgetting.
pub fn bwt(m: &WerMatrix, t: usize) -> Result<f64> {
    if t < 2 {
        return Err(undefined("bwt", t, "needs t ≥ 2"));
    }
    let mut s = 0.0;
    for i in 1..t {
        s += entry(m, "bwt", i, i)? - entry(m, "bwt", t, i)?;
    }
    Ok(s / (t - 1) as f64)
}

fn task_label<'a>(m: &'a WerMatrix, metric: &'static str, t: usize) -> Result<&'a str> {
    m.labels.get(t - 1).map(String::as_str).ok_or_else(|| undefined(metric, t, "no such stage"))
}

/// `WER_{t,t} − WER_t^joint`.
pub fn im(m: &WerMatrix, refs: &ReferenceWers, t: usize) -> Result<f64> {
    if t < 2 {
        return Err(undefined("im", t, "needs t ≥ 2"));
    }
    let wtt = entry(m, "im", t, t)?;
    let task = task_label(m, "im", t)?;
    let joint = refs.joint(task).ok_or_else(|| undefined("im", t, format!("no joint reference for `{task}`")))?;
    Ok(wtt - joint)
}

/// `WER_t^fine-tuned − WER_{t,t}`; positive means earlier tasks helped.
pub fn fwt(m: &WerMatrix, refs: &ReferenceWers, t: usize) -> Result<f64> {
    if t < 2 {
        return Err(undefined("fwt", t, "needs t ≥ 2"));
    }
    let wtt = entry(m, "fwt", t, t)?;
    let task = task_label(m, "fwt", t)?;
    let solo = refs.solo(task).ok_or_else(|| undefined("fwt", t, format!("no solo reference for `{task}`")))?;
    Ok(solo - wtt)
}

/// Plain mean, as used for the "average" row of a per-stage metric table.
pub fn column_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Mean and sample standard deviation (`n − 1` denominator; 0 for n = 1).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    let mean = column_mean(values)?;
    if values.len() < 2 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    Some((mean, var.sqrt()))
}

/// Per-stage metric values; index 0 is stage 1, where only AWER exists.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub awer: Vec<f64>,
    pub bwt: Vec<Option<f64>>,
    pub im: Vec<Option<f64>>,
    pub fwt: Vec<Option<f64>>,
}

impl MetricSeries {
    /// Every metric at every stage; IM/FWT need `refs`.
    pub fn compute(m: &WerMatrix, refs: Option<&ReferenceWers>) -> Result<Self> {
        let mut s = MetricSeries::default();
        for t in 1..=m.stages() {
            s.awer.push(awer(m, t)?);
            if t == 1 {
                s.bwt.push(None);
                s.im.push(None);
                s.fwt.push(None);
                continue;
            }
            s.bwt.push(Some(bwt(m, t)?));
            s.im.push(refs.map(|r| im(m, r, t)).transpose()?);
            s.fwt.push(refs.map(|r| fwt(m, r, t)).transpose()?);
        }
        Ok(s)
    }

    pub fn stages(&self) -> usize {
        self.awer.len()
    }

    pub fn get(&self, metric: &str, t: usize) -> Option<f64> {
        let k = t.checked_sub(1)?;
        match metric {
            "awer" => self.awer.get(k).copied(),
            "bwt" => self.bwt.get(k).copied().flatten(),
            "im" => self.im.get(k).copied().flatten(),
            "fwt" => self.fwt.get(k).copied().flatten(),
            _ => None,
        }
    }

    pub fn last(&self, metric: &str) -> Option<f64> {
        self.get(metric, self.stages())
    }

    /// `(stage, metric, value)` for every defined entry.
    pub fn entries(&self) -> Vec<(usize, &'static str, f64)> {
        let mut out = Vec::new();
        for t in 1..=self.stages() {
            for metric in METRICS {
                if let Some(v) = self.get(metric, t) {
                    out.push((t, metric, v));
                }
            }
        }
        out
    }

    /// Largest absolute difference over entries defined in either series;
    /// infinite if one defines an entry the other lacks.
    pub fn max_deviation(&self, other: &MetricSeries) -> f64 {
        let mut worst = 0.0f64;
        for t in 1..=self.stages().max(other.stages()) {
            for metric in METRICS {
                match (self.get(metric, t), other.get(metric, t)) {
                    (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
                    (None, None) => {}
                    _ => return f64::INFINITY,
                }
            }
        }
        worst
    }
}

/// One row of `metrics.csv`, in percent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub stage: usize,
    pub metric: String,
    pub value: f64,
    pub std: Option<f64>,
}

pub fn write_metrics_csv(path: &Path, rows: &[MetricRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stage", "metric", "value", "std"])?;
    for r in rows {
        let std = r.std.map(|s| s.to_string()).unwrap_or_default();
        w.write_record([r.stage.to_string(), r.metric.clone(), r.value.to_string(), std])?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    write_atomic(path, &bytes)
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<MetricRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

impl MetricSeries {
    pub fn to_rows(&self) -> Vec<MetricRow> {
        self.entries()
            .into_iter()
            .map(|(stage, metric, v)| MetricRow { stage, metric: metric.to_string(), value: v * 100.0, std: None })
            .collect()
    }

    /// Inverse of [`MetricSeries::to_rows`].
    pub fn from_rows(rows: &[MetricRow]) -> Result<Self> {
        let stages = rows.iter().map(|r| r.stage).max().unwrap_or(0);
        let mut s = MetricSeries {
            awer: vec![f64::NAN; stages],
            bwt: vec![None; stages],
            im: vec![None; stages],
            fwt: vec![None; stages],
        };
        for r in rows {
            if r.stage == 0 {
                return Err(BenchError::Config("metric stage 0".into()));
            }
            let (k, v) = (r.stage - 1, r.value / 100.0);
            match r.metric.as_str() {
                "awer" => s.awer[k] = v,
                "bwt" => s.bwt[k] = Some(v),
                "im" => s.im[k] = Some(v),
                "fwt" => s.fwt[k] = Some(v),
                other => return Err(BenchError::Config(format!("unknown metric `{other}`"))),
            }
        }
        if s.awer.iter().any(|v| v.is_nan()) {
            return Err(BenchError::Config("AWER missing for some stage".into()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ReferenceBudget;

    fn matrix(rows: &[&[f64]]) -> WerMatrix {
        let mut m = WerMatrix::new();
        for (k, r) in rows.iter().enumerate() {
            m.push_row(if k == 0 { "base" } else { ["n01", "n02", "n03"][k - 1] }, r.to_vec()).unwrap();
        }
        m
    }

    #[test]
    fn awer_examples() {
        assert_eq!(awer(&matrix(&[&[10.0]]), 1).unwrap(), 10.0);
        assert_eq!(awer(&matrix(&[&[10.0], &[20.0, 30.0]]), 2).unwrap(), 25.0);
        assert!(awer(&matrix(&[&[10.0]]), 2).is_err());
    }

    #[test]
    fn bwt_examples() {
        let m = matrix(&[&[10.0], &[50.0, 30.0]]);
        assert_eq!(bwt(&m, 2).unwrap(), -40.0);
        assert!(bwt(&m, 1).is_err());
    }

    #[test]
    fn im_fwt_examples() {
        let m = matrix(&[&[10.0], &[50.0, 30.0]]);
        let refs = ReferenceWers {
            joint: vec![("base".into(), 9.0), ("n01".into(), 25.0)],
            solo: vec![("n01".into(), 28.0)],
            budget: ReferenceBudget::default(),
        };
        assert_eq!(im(&m, &refs, 2).unwrap(), 5.0);
        assert_eq!(fwt(&m, &refs, 2).unwrap(), -2.0);
        let same = ReferenceWers { joint: vec![("n01".into(), 30.0)], solo: vec![("n01".into(), 30.0)], ..refs };
        assert_eq!(im(&m, &same, 2).unwrap(), 0.0);
        assert_eq!(fwt(&m, &same, 2).unwrap(), 0.0);
        assert!(im(&m, &ReferenceWers::default(), 2).is_err());
        assert!(fwt(&m, &ReferenceWers::default(), 2).is_err());
    }

    #[test]
    fn series_round_trip_through_rows() {
        let m = matrix(&[&[0.1], &[0.5, 0.3], &[0.6, 0.4, 1.2]]);
        let s = MetricSeries::compute(&m, None).unwrap();
        let back = MetricSeries::from_rows(&s.to_rows()).unwrap();
        assert!(s.max_deviation(&back) < 1e-12);
        assert_eq!(s.to_rows().len(), 3 + 2);
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[3.0, 3.0, 3.0]).unwrap().1, 0.0);
    }
}
