use super::SECONDS_PER_HOUR;
use crate::error::{ensure_finite, Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const DEFAULT_WINDOW_HOURS: f64 = 360.0;
pub const DEFAULT_STEP_HOURS: f64 = 24.0;

// Floor on the triangular blending weight so window edges still contribute
// where only one window covers a sample.
const EDGE_WEIGHT: f64 = 1e-3;
const SVD_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constituent {
    pub name: String,
    /// Cycles per hour.
    pub frequency_cph: f64,
}

impl Constituent {
    pub fn new(name: impl Into<String>, period_hours: f64) -> Self {
        Self { name: name.into(), frequency_cph: 1.0 / period_hours }
    }

    pub fn m2() -> Self {
        Self::new("M2", 12.420_601_2)
    }
    pub fn s2() -> Self {
        Self::new("S2", 12.0)
    }
    pub fn k1() -> Self {
        Self::new("K1", 23.934_469_6)
    }
    pub fn o1() -> Self {
        Self::new("O1", 25.819_341_7)
    }
}

/// Constituents and sliding-window geometry for the local harmonic analysis.
///
/// A window of length `L` separates two frequencies when `|Δf|·L ≥ 1`
/// (Rayleigh criterion); the mean counts as frequency zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicFitConfig {
    pub constituents: Vec<Constituent>,
    pub window_hours: f64,
    pub step_hours: f64,
}

impl Default for HarmonicFitConfig {
    fn default() -> Self {
        Self {
            constituents: vec![Constituent::m2(), Constituent::s2(), Constituent::k1(), Constituent::o1()],
            window_hours: DEFAULT_WINDOW_HOURS,
            step_hours: DEFAULT_STEP_HOURS,
        }
    }
}

impl HarmonicFitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.window_hours > 0.0 && self.window_hours.is_finite()) {
            return Err(Error::invalid("window length must be positive"));
        }
        if !(self.step_hours > 0.0 && self.step_hours <= self.window_hours) {
            return Err(Error::invalid(format!(
                "window step {} h must be positive and no longer than the window {} h",
                self.step_hours, self.window_hours
            )));
        }
        if self.constituents.is_empty() {
            return Err(Error::invalid("no tidal constituents configured"));
        }
        for c in &self.constituents {
            if !(c.frequency_cph > 0.0 && c.frequency_cph.is_finite()) {
                return Err(Error::invalid(format!("constituent {} has non-positive frequency", c.name)));
            }
            if c.frequency_cph * self.window_hours < 1.0 {
                return Err(Error::invalid(format!(
                    "constituent {} is not separable from the mean in a {} h window",
                    c.name, self.window_hours
                )));
            }
        }
        for (i, a) in self.constituents.iter().enumerate() {
            for b in &self.constituents[i + 1..] {
                let gap = (a.frequency_cph - b.frequency_cph).abs();
                if gap * self.window_hours < 1.0 {
                    let need = if gap > 0.0 { format!("{:.1} h", 1.0 / gap) } else { "no window".into() };
                    return Err(Error::invalid(format!(
                        "constituents {} and {} are unresolvable in a {} h window (need {need})",
                        a.name, b.name, self.window_hours
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstituentFit {
    pub name: String,
    pub frequency_cph: f64,
    pub amplitude: f64,
    /// Phase in radians of `amplitude·cos(ωt − phase)`, t in hours from the epoch.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFit {
    pub start_hours: f64,
    pub end_hours: f64,
    pub n_samples: usize,
    pub mean: f64,
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSplit {
    pub tidal: Vec<f64>,
    pub residual: Vec<f64>,
    pub windows: Vec<WindowFit>,
}

/// Least-squares fit of mean plus sinusoids at the constituent frequencies.
/// Returns the coefficient vector `[mean, A_1, B_1, …]`.
fn lsq(values: &[f64], hours: &[f64], origin: f64, constituents: &[Constituent]) -> Result<DVector<f64>> {
    let p = 1 + 2 * constituents.len();
    if values.len() < p {
        return Err(Error::TooFew { needed: p, got: values.len(), context: "harmonic least squares".into() });
    }
    let a = DMatrix::from_fn(values.len(), p, |i, j| {
        if j == 0 {
            return 1.0;
        }
        let w = TAU * constituents[(j - 1) / 2].frequency_cph * (hours[i] - origin);
        if j % 2 == 1 { w.cos() } else { w.sin() }
    });
    let b = DVector::from_column_slice(values);
    a.svd(true, true)
        .solve(&b, SVD_EPS)
        .map_err(|e| Error::Numerical(format!("harmonic least squares failed: {e}")))
}

fn tidal_at(coef: &DVector<f64>, constituents: &[Constituent], t: f64) -> f64 {
    constituents
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let w = TAU * c.frequency_cph * t;
            coef[1 + 2 * k] * w.cos() + coef[2 + 2 * k] * w.sin()
        })
        .sum()
}

fn to_hours(timestamps: &[f64]) -> Vec<f64> {
    timestamps.iter().map(|t| t / SECONDS_PER_HOUR).collect()
}

fn check_series(series: &[f64], timestamps: &[f64]) -> Result<()> {
    if series.len() != timestamps.len() {
        return Err(Error::invalid(format!("{} values but {} timestamps", series.len(), timestamps.len())));
    }
    ensure_finite(series, "current series")?;
    ensure_finite(timestamps, "timestamps")?;
    if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!("timestamps not strictly increasing at index {}", i + 1)));
    }
    Ok(())
}

/// Global least-squares amplitudes and phases over the whole record.
pub fn fit_constituents(series: &[f64], timestamps: &[f64], constituents: &[Constituent]) -> Result<(f64, Vec<ConstituentFit>)> {
    check_series(series, timestamps)?;
    let hours = to_hours(timestamps);
    let coef = lsq(series, &hours, 0.0, constituents)?;
    let fits = constituents
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let (a, b) = (coef[1 + 2 * k], coef[2 + 2 * k]);
            ConstituentFit { name: c.name.clone(), frequency_cph: c.frequency_cph, amplitude: a.hypot(b), phase: b.atan2(a) }
        })
        .collect();
    Ok((coef[0], fits))
}

/// Split a series into tidal and residual parts by sliding-window harmonic
/// analysis. Window estimates are blended with triangular weights centred on
/// each window; the window means stay in the residual, and
/// `residual = series − tidal` holds exactly.
pub fn harmonic_split(series: &[f64], timestamps: &[f64], cfg: &HarmonicFitConfig) -> Result<HarmonicSplit> {
    cfg.validate()?;
    check_series(series, timestamps)?;
    let hours = to_hours(timestamps);
    let (t0, t1) = match (hours.first(), hours.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::invalid("empty current series")),
    };
    let w = cfg.window_hours;
    if t1 - t0 < w {
        return Err(Error::invalid(format!(
            "record of {:.2} h is shorter than one {w} h harmonic window",
            t1 - t0
        )));
    }
    let mut starts = Vec::new();
    let mut s = t0;
    while s + w <= t1 {
        starts.push(s);
        s += cfg.step_hours;
    }
    if starts.last().is_some_and(|&l| l + w < t1) {
        starts.push(t1 - w);
    }

    let n = series.len();
    let mut num = vec![0.0; n];
    let mut den = vec![0.0; n];
    let mut windows = Vec::with_capacity(starts.len());
    for &start in &starts {
        let end = start + w;
        let lo = hours.partition_point(|&t| t < start);
        let hi = hours.partition_point(|&t| t <= end);
        let centre = start + 0.5 * w;
        let coef = lsq(&series[lo..hi], &hours[lo..hi], centre, &cfg.constituents)
            .map_err(|e| Error::invalid(format!("window starting at {start:.2} h: {e}")))?;
        // re-express phases against the absolute time origin
        let mut abs = coef.clone();
        for (k, c) in cfg.constituents.iter().enumerate() {
            let (a, b) = (coef[1 + 2 * k], coef[2 + 2 * k]);
            let (sn, cs) = (TAU * c.frequency_cph * centre).sin_cos();
            abs[1 + 2 * k] = a * cs - b * sn;
            abs[2 + 2 * k] = a * sn + b * cs;
        }
        for i in lo..hi {
            let wt = (1.0 - (hours[i] - centre).abs() / (0.5 * w)).max(0.0) + EDGE_WEIGHT;
            num[i] += wt * tidal_at(&abs, &cfg.constituents, hours[i]);
            den[i] += wt;
        }
        windows.push(WindowFit {
            start_hours: start,
            end_hours: end,
            n_samples: hi - lo,
            mean: coef[0],
            amplitudes: (0..cfg.constituents.len()).map(|k| coef[1 + 2 * k].hypot(coef[2 + 2 * k])).collect(),
        });
    }
    let tidal: Vec<f64> = num.iter().zip(&den).map(|(a, d)| a / d).collect();
    let residual = series.iter().zip(&tidal).map(|(x, t)| x - t).collect();
    Ok(HarmonicSplit { tidal, residual, windows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        HarmonicFitConfig::default().validate().unwrap();
    }

    #[test]
    fn short_window_names_pair() {
        let cfg = HarmonicFitConfig { window_hours: 200.0, ..Default::default() };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("M2") && msg.contains("S2"), "{msg}");
    }

    #[test]
    fn pure_m2_is_tidal() {
        let m2 = Constituent::m2();
        let t: Vec<f64> = (0..(24 * 40)).map(|i| i as f64 * 3600.0).collect();
        let x: Vec<f64> = t.iter().map(|s| 0.8 * (TAU * m2.frequency_cph * s / 3600.0 + 0.4).cos()).collect();
        let split = harmonic_split(&x, &t, &HarmonicFitConfig::default()).unwrap();
        let rms = (split.residual.iter().map(|r| r * r).sum::<f64>() / x.len() as f64).sqrt();
        assert!(rms < 1e-6, "{rms}");
        let (_, fits) = fit_constituents(&split.tidal, &t, &[m2]).unwrap();
        assert!((fits[0].amplitude - 0.8).abs() < 1e-6);
        for ((a, b), v) in split.tidal.iter().zip(&split.residual).zip(&x) {
            assert!((a + b - v).abs() < 1e-12);
        }
    }

    #[test]
    fn record_shorter_than_window() {
        let t: Vec<f64> = (0..100).map(|i| i as f64 * 3600.0).collect();
        assert!(harmonic_split(&vec![0.0; 100], &t, &HarmonicFitConfig::default()).is_err());
    }
}
