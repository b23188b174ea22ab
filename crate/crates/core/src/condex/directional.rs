use super::{fit_ht, GumbelPairSet, HtFit, MIN_HT_EXCEEDANCES};
use crate::error::{ensure_finite, Error, Result};
use serde::{Deserialize, Serialize};

/// Half-open direction interval `[lo, hi)` in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub lo: f64,
    pub hi: f64,
}

impl Sector {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, theta_deg: f64) -> bool {
        let t = theta_deg.rem_euclid(360.0);
        t >= self.lo && t < self.hi
    }
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorStatus {
    Fitted,
    /// No observations fall in the sector.
    NoData,
    /// Observations, but none above the threshold.
    NoExceedances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorFit {
    pub sector: Sector,
    pub n_obs: usize,
    pub n_exceedances: usize,
    pub status: SectorStatus,
    pub fit: Option<HtFit>,
}

/// Per-sector conditional extremes fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionalHtFit {
    pub sectors: Vec<SectorFit>,
}

impl DirectionalHtFit {
    /// The fit for the sector containing `theta_deg`, if that sector was fitted.
    pub fn fit_for(&self, theta_deg: f64) -> Option<&HtFit> {
        self.sectors.iter().find(|s| s.sector.contains(theta_deg)).and_then(|s| s.fit.as_ref())
    }
}

fn check_partition(sectors: &[Sector]) -> Result<()> {
    if sectors.is_empty() {
        return Err(Error::invalid("no sectors given"));
    }
    let mut sorted = sectors.to_vec();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    if sorted[0].lo != 0.0 {
        return Err(Error::invalid("sectors must start at 0°"));
    }
    for w in sorted.windows(2) {
        if w[0].hi != w[1].lo {
            return Err(Error::invalid(format!("sectors {} and {} leave a gap or overlap", w[0], w[1])));
        }
    }
    if let Some(s) = sorted.iter().find(|s| !(s.hi > s.lo)) {
        return Err(Error::invalid(format!("sector {s} is empty or reversed")));
    }
    if sorted[sorted.len() - 1].hi != 360.0 {
        return Err(Error::invalid("sectors must end at 360°"));
    }
    Ok(())
}

/// Fit an independent conditional extremes model in each direction sector.
///
/// Sectors must partition `[0, 360)`. Sectors without observations (or without
/// exceedances) are flagged and skipped; sectors with 1–9 exceedances are an
/// error naming every such sector.
pub fn fit_ht_directional(
    h: &[f64],
    t: &[f64],
    theta_deg: &[f64],
    sectors: &[Sector],
    threshold_u: f64,
) -> Result<DirectionalHtFit> {
    if h.len() != t.len() || h.len() != theta_deg.len() {
        return Err(Error::invalid("h, t and theta must have equal lengths"));
    }
    ensure_finite(theta_deg, "directions")?;
    check_partition(sectors)?;

    let mut out = Vec::with_capacity(sectors.len());
    let mut short: Vec<String> = Vec::new();
    for s in sectors {
        let idx: Vec<usize> = (0..h.len()).filter(|&i| s.contains(theta_deg[i])).collect();
        let n_exc = idx.iter().filter(|&&i| h[i] > threshold_u).count();
        let (status, fit) = if idx.is_empty() {
            (SectorStatus::NoData, None)
        } else if n_exc == 0 {
            (SectorStatus::NoExceedances, None)
        } else if n_exc < MIN_HT_EXCEEDANCES {
            short.push(format!("{s} has {n_exc}"));
            (SectorStatus::NoExceedances, None)
        } else {
            let pairs = GumbelPairSet::new(idx.iter().map(|&i| h[i]).collect(), idx.iter().map(|&i| t[i]).collect())?;
            let f = fit_ht(&pairs, threshold_u).map_err(|e| Error::Numerical(format!("sector {s}: {e}")))?;
            (SectorStatus::Fitted, Some(f))
        };
        out.push(SectorFit { sector: *s, n_obs: idx.len(), n_exceedances: n_exc, status, fit });
    }
    if !short.is_empty() {
        return Err(Error::TooFew {
            needed: MIN_HT_EXCEEDANCES,
            got: 0,
            context: format!("sector exceedances: {}", short.join("; ")),
        });
    }
    Ok(DirectionalHtFit { sectors: out })
}
