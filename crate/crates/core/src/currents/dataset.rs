use super::axes::principal_axes;
use super::harmonic::{harmonic_split, HarmonicFitConfig};
use super::hourly::{hourly_extrema, HourlyExtrema};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, format_timestamp, parse_f64, parse_timestamp};
use rayon::prelude::*;
use std::collections::HashMap;
use std::path::Path;

const RECONSTRUCTION_TOL: f64 = 1e-9;
const ENERGY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DepthSeries {
    pub label: String,
    pub east: Vec<f64>,
    pub north: Vec<f64>,
}

/// Velocity series at several depths on one shared time base (seconds since epoch).
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentProfileDataset {
    timestamps: Vec<f64>,
    depths: Vec<DepthSeries>,
}

impl CurrentProfileDataset {
    pub fn new(timestamps: Vec<f64>, depths: Vec<DepthSeries>) -> Result<Self> {
        if depths.is_empty() {
            return Err(Error::invalid("dataset has no depths"));
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!("timestamps not strictly increasing at index {}", i + 1)));
        }
        for d in &depths {
            if d.east.len() != timestamps.len() || d.north.len() != timestamps.len() {
                return Err(Error::invalid(format!("depth {} does not share the common time base", d.label)));
            }
        }
        Ok(Self { timestamps, depths })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn depths(&self) -> &[DepthSeries] {
        &self.depths
    }

    /// Long-format CSV: `timestamp,depth_label,east_mps,north_mps`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("timestamp,depth_label,east_mps,north_mps\n");
        for (i, t) in self.timestamps.iter().enumerate() {
            for d in &self.depths {
                out.push_str(&format!("{},{},{},{}\n", format_timestamp(*t), d.label, fmt_f64(d.east[i]), fmt_f64(d.north[i])));
            }
        }
        out
    }
}

/// Read a long-format multi-depth CSV. Depths keep their order of first
/// appearance and must all report the same timestamps.
pub fn read_current_csv(path: &Path) -> Result<CurrentProfileDataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::invalid(format!("{}: missing column {name}", path.display())))
    };
    let (ti, di, ei, ni) = (col("timestamp")?, col("depth_label")?, col("east_mps")?, col("north_mps")?);
    let mut order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<(f64, f64, f64)>> = HashMap::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let at = format!("row {}", line + 2);
        let t = parse_timestamp(rec.get(ti).unwrap_or("")).map_err(|e| Error::invalid(format!("{at}: {e}")))?;
        let label = rec.get(di).unwrap_or("").to_string();
        if label.is_empty() {
            return Err(Error::invalid(format!("{at}: empty depth label")));
        }
        let e = parse_f64(rec.get(ei).unwrap_or(""), &at)?;
        let n = parse_f64(rec.get(ni).unwrap_or(""), &at)?;
        if !rows.contains_key(&label) {
            order.push(label.clone());
        }
        rows.entry(label).or_default().push((t, e, n));
    }
    if order.is_empty() {
        return Err(Error::invalid(format!("{}: no data rows", path.display())));
    }
    let mut timestamps: Option<Vec<f64>> = None;
    let mut depths = Vec::with_capacity(order.len());
    for label in order {
        let mut r = rows.remove(&label).unwrap_or_default();
        r.sort_by(|a, b| a.0.total_cmp(&b.0));
        let t: Vec<f64> = r.iter().map(|x| x.0).collect();
        match &timestamps {
            None => timestamps = Some(t),
            Some(common) if *common != t => {
                return Err(Error::invalid(format!("depth {label} does not share the time base of the first depth")));
            }
            _ => {}
        }
        depths.push(DepthSeries { label, east: r.iter().map(|x| x.1).collect(), north: r.iter().map(|x| x.2).collect() });
    }
    CurrentProfileDataset::new(timestamps.unwrap_or_default(), depths)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedDepth {
    pub label: String,
    pub major_angle_deg: f64,
    pub major: Vec<f64>,
    pub minor: Vec<f64>,
    pub tidal_major: Vec<f64>,
    pub tidal_minor: Vec<f64>,
    pub residual_major: Vec<f64>,
    pub residual_minor: Vec<f64>,
    pub residual_hourly: [HourlyExtrema; 2],
    pub tidal_hourly: [HourlyExtrema; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedProfile {
    pub timestamps: Vec<f64>,
    pub depths: Vec<ProcessedDepth>,
}

fn process_depth(d: &DepthSeries, t: &[f64], cfg: &HarmonicFitConfig) -> Result<ProcessedDepth> {
    let ctx = |e: Error| match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("depth {}: {m}", d.label)),
        Error::Numerical(m) => Error::Numerical(format!("depth {}: {m}", d.label)),
        other => other,
    };
    let ax = principal_axes(&d.east, &d.north).map_err(ctx)?;
    let sm = harmonic_split(&ax.major, t, cfg).map_err(ctx)?;
    let sn = harmonic_split(&ax.minor, t, cfg).map_err(ctx)?;
    let h = |x: &[f64]| hourly_extrema(x, t).map_err(ctx);
    Ok(ProcessedDepth {
        label: d.label.clone(),
        major_angle_deg: ax.major_angle_deg,
        residual_hourly: [h(&sm.residual)?, h(&sn.residual)?],
        tidal_hourly: [h(&sm.tidal)?, h(&sn.tidal)?],
        major: ax.major,
        minor: ax.minor,
        tidal_major: sm.tidal,
        tidal_minor: sn.tidal,
        residual_major: sm.residual,
        residual_minor: sn.residual,
    })
}

/// Rotate, split and bucket every depth. Depths are processed in parallel.
pub fn process_dataset(ds: &CurrentProfileDataset, cfg: &HarmonicFitConfig) -> Result<ProcessedProfile> {
    cfg.validate()?;
    let depths = ds
        .depths
        .par_iter()
        .map(|d| process_depth(d, &ds.timestamps, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProcessedProfile { timestamps: ds.timestamps.clone(), depths })
}

/// Re-check energy preservation, exact reconstruction and extrema ordering.
pub fn verify_processed(ds: &CurrentProfileDataset, p: &ProcessedProfile) -> Result<()> {
    if ds.depths.len() != p.depths.len() {
        return Err(Error::Invariant("processed profile and dataset differ in depth count".into()));
    }
    for (raw, d) in ds.depths.iter().zip(&p.depths) {
        let e_raw: f64 = raw.east.iter().zip(&raw.north).map(|(e, n)| e * e + n * n).sum();
        let e_rot: f64 = d.major.iter().zip(&d.minor).map(|(a, b)| a * a + b * b).sum();
        if (e_raw - e_rot).abs() > ENERGY_REL_TOL * e_raw.max(f64::MIN_POSITIVE) {
            return Err(Error::Invariant(format!("depth {}: rotation changed kinetic energy", d.label)));
        }
        for (total, tidal, resid, axis) in [
            (&d.major, &d.tidal_major, &d.residual_major, "major"),
            (&d.minor, &d.tidal_minor, &d.residual_minor, "minor"),
        ] {
            if let Some(i) = (0..total.len()).find(|&i| (tidal[i] + resid[i] - total[i]).abs() > RECONSTRUCTION_TOL) {
                return Err(Error::Invariant(format!(
                    "depth {} {axis}: tidal + residual differs from total at sample {i}",
                    d.label
                )));
            }
        }
        for h in d.residual_hourly.iter().chain(&d.tidal_hourly) {
            if h.maxima.iter().zip(&h.minima).any(|(a, b)| a < b) {
                return Err(Error::Invariant(format!("depth {}: hourly maximum below minimum", d.label)));
            }
        }
    }
    Ok(())
}

impl ProcessedProfile {
    /// Per-depth CSV of the rotated, tidal and residual series.
    pub fn depth_csv(&self, k: usize) -> String {
        let d = &self.depths[k];
        let mut out = String::from("timestamp,major,minor,tidal_major,tidal_minor,residual_major,residual_minor\n");
        for (i, t) in self.timestamps.iter().enumerate() {
            let cells = [d.major[i], d.minor[i], d.tidal_major[i], d.tidal_minor[i], d.residual_major[i], d.residual_minor[i]];
            let cells: Vec<String> = cells.iter().map(|v| fmt_f64(*v)).collect();
            out.push_str(&format!("{},{}\n", format_timestamp(*t), cells.join(",")));
        }
        out
    }

    /// Hourly extrema of every depth in one long-format CSV.
    pub fn hourly_csv(&self) -> String {
        let mut out = String::from(
            "hour,depth_label,residual_major_max,residual_major_min,residual_minor_max,residual_minor_min,\
tidal_major_max,tidal_major_min,tidal_minor_max,tidal_minor_min\n",
        );
        for d in &self.depths {
            let [rm, rn] = &d.residual_hourly;
            let [tm, tn] = &d.tidal_hourly;
            for (i, h) in rm.hours.iter().enumerate() {
                let cells = [rm.maxima[i], rm.minima[i], rn.maxima[i], rn.minima[i], tm.maxima[i], tm.minima[i], tn.maxima[i], tn.minima[i]];
                let cells: Vec<String> = cells.iter().map(|v| fmt_f64(*v)).collect();
                out.push_str(&format!("{},{},{}\n", format_timestamp(*h as f64 * 3600.0), d.label, cells.join(",")));
            }
        }
        out
    }
}
