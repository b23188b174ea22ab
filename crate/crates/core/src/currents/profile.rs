use super::dataset::ProcessedProfile;
use super::recombine::recombine;
use crate::condex::{fit_ht_multivariate, gumbel_quantile, simulate_multivariate_gumbel};
use crate::error::{Error, Result};
use crate::marginals::{SemiParametricMarginal, UnivariateSample};
use crate::numeric::stats::median;
use crate::rng::derive_seed;
use serde::{Deserialize, Serialize};

/// Per-depth column layout of the extrema matrices.
pub const EXTREMA_COLUMNS: [&str; 4] = ["major_max", "major_min", "minor_max", "minor_min"];
const HOURS_PER_YEAR: f64 = 8766.0;
const MIN_KEPT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditioningAxis {
    Major,
    Minor,
}

/// Which series the return level applies to at the conditioning depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditioningMode {
    /// Residual hourly maxima alone.
    Residual,
    /// Residual plus resampled tide.
    Total,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCondexConfig {
    pub conditioning_depth: usize,
    pub axis: ConditioningAxis,
    pub mode: ConditioningMode,
    /// Quantile of each column used as the GPD threshold.
    pub marginal_quantile: f64,
    /// Quantile (on the uniform scale) used as the conditional extremes threshold.
    pub dependence_quantile: f64,
    pub return_period_years: f64,
    pub n_sim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthMedians {
    pub label: String,
    pub major_angle_deg: f64,
    pub major_max: f64,
    pub major_min: f64,
    pub minor_max: f64,
    pub minor_min: f64,
    /// Direction of the conditional extreme relative to the depth's major axis,
    /// degrees, positive anti-clockwise.
    pub rotation_deg: f64,
}

impl DepthMedians {
    fn from_columns(label: &str, angle: f64, c: [f64; 4]) -> Self {
        let minor_mid = 0.5 * (c[2] + c[3]);
        Self {
            label: label.to_string(),
            major_angle_deg: angle,
            major_max: c[0],
            major_min: c[1],
            minor_max: c[2],
            minor_min: c[3],
            rotation_deg: minor_mid.atan2(c[0]).to_degrees(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub mode: ConditioningMode,
    pub axis: ConditioningAxis,
    pub conditioning_depth: String,
    pub return_period_years: f64,
    /// Physical return level of the conditioning component.
    pub conditioning_level: f64,
    /// True when the residual simulation bound had to be raised to the model
    /// threshold, so small residuals with large tides are not represented.
    pub bound_truncated: bool,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub n_sim: usize,
    pub n_kept: usize,
    pub conditional: Vec<DepthMedians>,
    pub unconditional: Vec<DepthMedians>,
}

type Rows = Vec<Vec<f64>>;

/// Residual and tidal hourly extrema, one row per complete hour.
fn extrema_matrices(p: &ProcessedProfile) -> Result<(Rows, Rows)> {
    let n = p.depths.first().map(|d| d.residual_hourly[0].hours.len()).unwrap_or(0);
    for d in &p.depths {
        if d.residual_hourly.iter().chain(&d.tidal_hourly).any(|h| h.hours.len() != n) {
            return Err(Error::invalid(format!("depth {} has a different hourly layout", d.label)));
        }
    }
    let row = |i: usize, tidal: bool| -> Vec<f64> {
        p.depths
            .iter()
            .flat_map(|d| {
                let [m, n] = if tidal { &d.tidal_hourly } else { &d.residual_hourly };
                [m.maxima[i], m.minima[i], n.maxima[i], n.minima[i]]
            })
            .collect()
    };
    Ok(((0..n).map(|i| row(i, false)).collect(), (0..n).map(|i| row(i, true)).collect()))
}

fn column_medians(rows: &[Vec<f64>], p: &ProcessedProfile) -> Vec<DepthMedians> {
    p.depths
        .iter()
        .enumerate()
        .map(|(d, depth)| {
            let c: [f64; 4] = std::array::from_fn(|j| median(&rows.iter().map(|r| r[4 * d + j]).collect::<Vec<_>>()));
            DepthMedians::from_columns(&depth.label, depth.major_angle_deg, c)
        })
        .collect()
}

/// Conditional extremes of the whole current profile given a return-level
/// exceedance at one depth and axis.
///
/// Fits a semi-parametric marginal to every residual hourly-extremum column,
/// a multivariate conditional extremes model on the Gumbel scale, simulates
/// residual profiles, adds resampled tidal profiles and reports per-depth
/// medians of the result.
pub fn profile_conditional_extremes(p: &ProcessedProfile, cfg: &ProfileCondexConfig) -> Result<ProfileReport> {
    let n_depths = p.depths.len();
    if cfg.conditioning_depth >= n_depths {
        return Err(Error::invalid(format!(
            "conditioning depth {} out of range for {n_depths} depths",
            cfg.conditioning_depth
        )));
    }
    if !(cfg.dependence_quantile > 0.0 && cfg.dependence_quantile < 1.0) {
        return Err(Error::invalid("dependence quantile must lie in (0, 1)"));
    }
    if cfg.n_sim == 0 {
        return Err(Error::invalid("n_sim must be positive"));
    }
    let (resid, tidal) = extrema_matrices(p)?;
    if resid.is_empty() {
        return Err(Error::invalid("no complete hourly buckets"));
    }
    let width = 4 * n_depths;
    let k = 4 * cfg.conditioning_depth + if cfg.axis == ConditioningAxis::Major { 0 } else { 2 };

    let marginals = (0..width)
        .map(|j| {
            let label = format!("{}:{}", p.depths[j / 4].label, EXTREMA_COLUMNS[j % 4]);
            let s = UnivariateSample::new(resid.iter().map(|r| r[j]).collect(), label.clone())?;
            SemiParametricMarginal::fit_quantile(s, cfg.marginal_quantile, HOURS_PER_YEAR)
                .map_err(|e| Error::Numerical(format!("marginal {label}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let gumbel = resid
        .iter()
        .map(|r| r.iter().zip(&marginals).map(|(v, m)| m.to_gumbel(*v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let u = gumbel_quantile(cfg.dependence_quantile);
    let fit = fit_ht_multivariate(&gumbel, k, u)?;

    let (level, x_min_g, truncated) = match cfg.mode {
        ConditioningMode::Residual => {
            let level = marginals[k].return_value(cfg.return_period_years)?;
            let g = marginals[k].to_gumbel(level)?;
            if g < u {
                return Err(Error::invalid(format!(
                    "{}-year residual level lies below the dependence threshold",
                    cfg.return_period_years
                )));
            }
            (level, g, false)
        }
        ConditioningMode::Total => {
            let totals: Vec<f64> = resid.iter().zip(&tidal).map(|(r, t)| r[k] + t[k]).collect();
            let m_tot = SemiParametricMarginal::fit_quantile(
                UnivariateSample::new(totals, "total")?,
                cfg.marginal_quantile,
                HOURS_PER_YEAR,
            )?;
            let level = m_tot.return_value(cfg.return_period_years)?;
            let max_tide = tidal.iter().map(|t| t[k]).fold(f64::NEG_INFINITY, f64::max);
            let g = marginals[k].to_gumbel(level - max_tide)?;
            (level, g.max(u), g < u)
        }
    };

    let sims = simulate_multivariate_gumbel(&fit, cfg.n_sim, x_min_g, derive_seed(cfg.seed, "profile-simulate"))?;
    let physical = sims
        .iter()
        .map(|r| r.iter().zip(&marginals).map(|(g, m)| m.from_gumbel(*g)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut totals = recombine(&physical, &tidal, derive_seed(cfg.seed, "profile-recombine"))?;
    if cfg.mode == ConditioningMode::Total {
        totals.retain(|r| r[k] > level);
    }
    if totals.len() < MIN_KEPT {
        return Err(Error::TooFew {
            needed: MIN_KEPT,
            got: totals.len(),
            context: "simulated profiles above the conditioning level; increase n_sim".into(),
        });
    }
    let observed: Vec<Vec<f64>> =
        resid.iter().zip(&tidal).map(|(r, t)| r.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
    Ok(ProfileReport {
        mode: cfg.mode,
        axis: cfg.axis,
        conditioning_depth: p.depths[cfg.conditioning_depth].label.clone(),
        return_period_years: cfg.return_period_years,
        conditioning_level: level,
        bound_truncated: truncated,
        alpha: fit.alpha.clone(),
        beta: fit.beta.clone(),
        n_sim: cfg.n_sim,
        n_kept: totals.len(),
        conditional: column_medians(&totals, p),
        unconditional: column_medians(&observed, p),
    })
}
