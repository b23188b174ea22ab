//! Heffernan–Tawn conditional extremes on the standard Gumbel scale.
//!
//! For a conditioning variate `X` above a threshold `u`, the conditioned
//! variate follows `Y | X = x = αx + x^β Z`. Parameters are estimated under a
//! Gaussian working assumption for `Z` (with nuisance location `μ` and scale
//! `σ`); the empirical residuals then stand in for the distribution of `Z`
//! when simulating.

mod directional;
mod fit;
mod multivariate;
mod quantreg;
mod return_curve;
mod simulate;

pub use directional::{fit_ht_directional, DirectionalHtFit, Sector, SectorFit, SectorStatus};
pub use fit::{fit_ht, ht_objective, residuals, HtFit, ALPHA_STARTS, BETA_BOUNDS, BETA_STARTS, MIN_HT_EXCEEDANCES};
pub use multivariate::{fit_ht_multivariate, simulate_multivariate, simulate_multivariate_gumbel, MultiHtFit};
pub use quantreg::{pinball_loss, quantile_regression, QuantileFit};
pub use return_curve::{conditional_return_curve, Bootstrap, ConditionalReturnCurve, DEFAULT_BOOTSTRAP_REPLICATES};
pub use simulate::{draw_truncated_gumbel, simulate_conditional, simulate_conditional_gumbel};

use crate::error::{ensure_finite, Error, Result};

/// Paired observations on the Gumbel scale: `x` conditions, `y` is conditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct GumbelPairSet {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl GumbelPairSet {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::invalid(format!("pair arrays differ in length: {} vs {}", x.len(), y.len())));
        }
        ensure_finite(&x, "conditioning variate")?;
        ensure_finite(&y, "conditioned variate")?;
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Pairs with `x > u`, in input order.
    pub fn exceedances(&self, u: f64) -> (Vec<f64>, Vec<f64>) {
        self.x.iter().zip(&self.y).filter(|(x, _)| **x > u).map(|(x, y)| (*x, *y)).unzip()
    }
}

/// Standard Gumbel CDF.
pub fn gumbel_cdf(y: f64) -> f64 {
    (-(-y).exp()).exp()
}

/// Standard Gumbel quantile.
pub fn gumbel_quantile(p: f64) -> f64 {
    -(-p.ln()).ln()
}
