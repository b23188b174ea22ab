use crate::error::{ensure_finite, Error, Result};
use crate::numeric::stats::median;

#[derive(Debug, Clone, PartialEq)]
pub struct HourlyExtrema {
    /// Bucket index: whole hours since the epoch.
    pub hours: Vec<i64>,
    pub maxima: Vec<f64>,
    pub minima: Vec<f64>,
    /// Hours inside the record with no samples.
    pub missing: Vec<i64>,
}

/// Maximum and minimum of the series in each clock hour.
///
/// A leading hour is kept only if the record starts on the hour, a trailing hour
/// only if the record reaches its last sampling slot. Interior hours without
/// samples are listed as missing and not filled.
pub fn hourly_extrema(series: &[f64], timestamps: &[f64]) -> Result<HourlyExtrema> {
    if series.len() != timestamps.len() {
        return Err(Error::invalid(format!("{} values but {} timestamps", series.len(), timestamps.len())));
    }
    if series.len() < 2 {
        return Err(Error::TooFew { needed: 2, got: series.len(), context: "hourly extrema".into() });
    }
    ensure_finite(series, "series")?;
    ensure_finite(timestamps, "timestamps")?;
    // whole seconds keep bucket edges exact
    let secs: Vec<i64> = timestamps.iter().map(|t| t.round() as i64).collect();
    if let Some(i) = secs.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!("timestamps not strictly increasing at index {}", i + 1)));
    }
    let steps: Vec<f64> = secs.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    let dt = median(&steps);
    if dt > 3600.0 {
        return Err(Error::invalid(format!("sampling interval {dt} s exceeds one hour")));
    }

    let first = secs[0].div_euclid(3600);
    let last = secs[secs.len() - 1].div_euclid(3600);
    let lead_ok = secs[0].rem_euclid(3600) == 0;
    let trail_ok = (secs[secs.len() - 1] - last * 3600) as f64 + dt >= 3600.0 - 0.5;

    let mut out = HourlyExtrema { hours: Vec::new(), maxima: Vec::new(), minima: Vec::new(), missing: Vec::new() };
    let mut i = 0;
    for h in first..=last {
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        let mut any = false;
        while i < secs.len() && secs[i].div_euclid(3600) == h {
            hi = hi.max(series[i]);
            lo = lo.min(series[i]);
            any = true;
            i += 1;
        }
        if (h == first && !lead_ok) || (h == last && !trail_ok) {
            continue;
        }
        if any {
            out.hours.push(h);
            out.maxima.push(hi);
            out.minima.push(lo);
        } else {
            out.missing.push(h);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ten_minute(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 * 600.0).collect()
    }

    #[test]
    fn constant_series() {
        let t = ten_minute(60);
        let h = hourly_extrema(&vec![0.7; 60], &t).unwrap();
        assert_eq!(h.hours.len(), 10);
        assert!(h.maxima.iter().chain(&h.minima).all(|&v| v == 0.7));
    }

    #[test]
    fn spike_lands_in_its_hour() {
        let t = ten_minute(60);
        let mut x = vec![0.0; 60];
        x[7 * 6 + 3] = 5.0;
        let h = hourly_extrema(&x, &t).unwrap();
        assert_eq!(h.maxima[7], 5.0);
        assert_eq!(h.maxima.iter().filter(|&&v| v == 5.0).count(), 1);
    }

    #[test]
    fn partial_edges_dropped_and_gaps_reported() {
        let mut t: Vec<f64> = (1..40).map(|i| i as f64 * 600.0).collect();
        t.retain(|s| !(3.0 * 3600.0..4.0 * 3600.0).contains(s));
        let h = hourly_extrema(&vec![1.0; t.len()], &t).unwrap();
        // hour 0 starts late, hour 6 ends early, hour 3 is empty
        assert_eq!(h.hours, vec![1, 2, 4, 5]);
        assert_eq!(h.missing, vec![3]);
    }

    #[test]
    fn coarse_sampling_rejected() {
        let t: Vec<f64> = (0..10).map(|i| i as f64 * 7200.0).collect();
        assert!(hourly_extrema(&[0.0; 10], &t).is_err());
    }
}
