//! Plot-ready series: one CSV per metric with header `stage,value,std`
//! (values in percent; `std` empty for single runs).

use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};
use crate::matrix::write_atomic;
use crate::metrics::{MetricRow, METRICS};

/// Writes `<dir>/<metric>.csv` for every metric present in `rows`.
pub fn emit_plot_data(rows: &[MetricRow], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for metric in METRICS {
        let series: Vec<&MetricRow> = rows.iter().filter(|r| r.metric == metric).collect();
        if series.is_empty() {
            continue;
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["stage", "value", "std"])?;
        for r in series {
            w.write_record([r.stage.to_string(), r.value.to_string(), r.std.map(|s| s.to_string()).unwrap_or_default()])?;
        }
        let path = dir.join(format!("{metric}.csv"));
        write_atomic(&path, &w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?)?;
        written.push(path);
    }
    Ok(written)
}
