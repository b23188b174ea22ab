use super::{fit_ht, simulate_conditional_gumbel, GumbelPairSet, HtFit};
use crate::error::{Error, Result};
use crate::marginals::SemiParametricMarginal;
use crate::numeric::stats::{histogram_mode, median, quantile};
use crate::rng::{derive_seed, rng_from_seed};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BOUNDS_TAIL: f64 = 0.025;
pub const DEFAULT_BOOTSTRAP_REPLICATES: usize = 100;
const MIN_SIMULATED: usize = 100;

/// Nonparametric bootstrap settings for uncertainty bands.
#[derive(Debug, Clone, Copy)]
pub struct Bootstrap<'a> {
    /// Observed Gumbel-scale pairs the model was fitted to.
    pub pairs: &'a GumbelPairSet,
    pub replicates: usize,
}

/// Median and 95% band of the conditioned variate given the conditioning
/// variate exceeds its return value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalReturnCurve {
    pub exceed_prob_annual: f64,
    pub x_return: f64,
    pub x_return_gumbel: f64,
    pub median_y: f64,
    pub median_y_gumbel: f64,
    /// Histogram mode of the simulated conditioned values ("most probable").
    pub mode_y: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub replicates: usize,
}

fn simulated_median(
    fit: &HtFit,
    m_y: &SemiParametricMarginal,
    x_g: f64,
    n_sim: usize,
    seed: u64,
) -> Result<(f64, f64, Vec<f64>)> {
    let sims = simulate_conditional_gumbel(fit, n_sim, x_g, seed)?;
    let yg: Vec<f64> = sims.iter().map(|s| s.1).collect();
    let yp = yg.iter().map(|&g| m_y.from_gumbel(g)).collect::<Result<Vec<f64>>>()?;
    Ok((median(&yp), median(&yg), yp))
}

/// Conditional return curve point for annual exceedance probability `exceed_prob_annual`.
///
/// `x_return` is the marginal return value at `1/exceed_prob_annual` years.
/// `n_sim` pairs are simulated with `x` above it; the median of the simulated
/// `y` is reported on both scales. With a bootstrap, each replicate resamples
/// the exceedance pairs with replacement, refits, and resimulates; the band is
/// the 2.5%/97.5% quantiles of replicate medians. Replicate `r` uses seed
/// `seed + r + 1` and replicates may run in parallel without changing results.
pub fn conditional_return_curve(
    fit: &HtFit,
    m_x: &SemiParametricMarginal,
    m_y: &SemiParametricMarginal,
    exceed_prob_annual: f64,
    n_sim: usize,
    seed: u64,
    bootstrap: Option<Bootstrap<'_>>,
) -> Result<ConditionalReturnCurve> {
    if !(exceed_prob_annual > 0.0 && exceed_prob_annual < 1.0) {
        return Err(Error::invalid(format!("exceedance probability {exceed_prob_annual} outside (0, 1)")));
    }
    if n_sim < MIN_SIMULATED {
        return Err(Error::TooFew { needed: MIN_SIMULATED, got: n_sim, context: "simulated exceedances".into() });
    }
    let x_return = m_x.return_value(1.0 / exceed_prob_annual)?;
    let x_g = m_x.to_gumbel(x_return)?;
    let (median_y, median_y_gumbel, yp) = simulated_median(fit, m_y, x_g, n_sim, seed)?;
    let mode_y = histogram_mode(&yp);

    let (band_lo, band_hi, replicates) = match bootstrap {
        Some(b) if b.replicates > 0 => {
            let (ex, ey) = b.pairs.exceedances(fit.threshold_u);
            if ex.is_empty() {
                return Err(Error::invalid("bootstrap pairs contain no exceedances"));
            }
            let medians = (0..b.replicates)
                .into_par_iter()
                .map(|r| {
                    let rep_seed = seed.wrapping_add(r as u64 + 1);
                    let mut rng = rng_from_seed(derive_seed(rep_seed, "bootstrap-resample"));
                    let (bx, by): (Vec<f64>, Vec<f64>) = (0..ex.len())
                        .map(|_| {
                            let i = rng.random_range(0..ex.len());
                            (ex[i], ey[i])
                        })
                        .unzip();
                    let refit = fit_ht(&GumbelPairSet::new(bx, by)?, fit.threshold_u)?;
                    Ok(simulated_median(&refit, m_y, x_g, n_sim, derive_seed(rep_seed, "bootstrap-simulate"))?.0)
                })
                .collect::<Result<Vec<f64>>>()?;
            (quantile(&medians, DEFAULT_BOUNDS_TAIL), quantile(&medians, 1.0 - DEFAULT_BOUNDS_TAIL), b.replicates)
        }
        _ => (median_y, median_y, 0),
    };

    Ok(ConditionalReturnCurve {
        exceed_prob_annual,
        x_return,
        x_return_gumbel: x_g,
        median_y,
        median_y_gumbel,
        mode_y,
        band_lo,
        band_hi,
        replicates,
    })
}
