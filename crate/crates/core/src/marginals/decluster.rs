use super::UnivariateSample;
use crate::error::{Error, Result};

pub const DEFAULT_GAP_HOURS: f64 = 24.0;

/// Runs declustering: storm peaks above `threshold`.
///
/// A new cluster starts when an exceedance follows the previous exceedance by at
/// least `gap_hours`. The returned sample holds each cluster's maximum and its
/// timestamp.
pub fn decluster(s: &UnivariateSample, threshold: f64, gap_hours: f64) -> Result<UnivariateSample> {
    let t = s
        .timestamps()
        .ok_or_else(|| Error::invalid("declustering needs timestamps"))?;
    if !(gap_hours > 0.0) {
        return Err(Error::invalid("gap_hours must be positive"));
    }
    let gap = gap_hours * 3600.0;
    let mut peaks: Vec<f64> = Vec::new();
    let mut peak_times: Vec<f64> = Vec::new();
    let mut last_exceed: Option<f64> = None;
    for (&v, &ti) in s.values().iter().zip(t) {
        if v <= threshold {
            continue;
        }
        match last_exceed {
            Some(prev) if ti - prev < gap => {
                let last = peaks.len() - 1;
                if v > peaks[last] {
                    peaks[last] = v;
                    peak_times[last] = ti;
                }
            }
            _ => {
                peaks.push(v);
                peak_times.push(ti);
            }
        }
        last_exceed = Some(ti);
    }
    UnivariateSample::with_timestamps(peaks, peak_times, s.label())
}
