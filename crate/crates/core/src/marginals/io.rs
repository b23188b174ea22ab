use super::{SemiParametricMarginal, UnivariateSample};
use crate::error::{Error, Result};
use crate::io::{parse_f64, parse_timestamp};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// JSON form of a fitted marginal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalRecord {
    pub label: String,
    pub threshold: f64,
    pub sigma: f64,
    pub xi: f64,
    pub tail_fraction: f64,
    pub events_per_year: f64,
    pub n: usize,
}

impl From<&SemiParametricMarginal> for MarginalRecord {
    fn from(m: &SemiParametricMarginal) -> Self {
        Self {
            label: m.sample().label().to_string(),
            threshold: m.threshold(),
            sigma: m.gpd().sigma,
            xi: m.gpd().xi,
            tail_fraction: m.tail_fraction(),
            events_per_year: m.events_per_year(),
            n: m.sample().len(),
        }
    }
}

/// Read a `timestamp,value` CSV (header required) into a time-stamped sample.
/// Rows are sorted by time.
pub fn read_series_csv(path: &Path, label: &str) -> Result<UnivariateSample> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let ti = headers.iter().position(|h| h.eq_ignore_ascii_case("timestamp"));
    let vi = headers.iter().position(|h| h.eq_ignore_ascii_case("value"));
    let (ti, vi) = match (ti, vi) {
        (Some(t), Some(v)) => (t, v),
        _ => return Err(Error::invalid(format!("{}: expected columns timestamp,value", path.display()))),
    };
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let t = parse_timestamp(rec.get(ti).unwrap_or(""))
            .map_err(|e| Error::invalid(format!("row {}: {e}", line + 2)))?;
        let v = parse_f64(rec.get(vi).unwrap_or(""), &format!("row {}", line + 2))?;
        rows.push((t, v));
    }
    if rows.is_empty() {
        return Err(Error::invalid(format!("{}: no data rows", path.display())));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (t, v): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    UnivariateSample::with_timestamps(v, t, label)
}
