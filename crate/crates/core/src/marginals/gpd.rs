use crate::error::{ensure_finite, Error, Result};
use crate::numeric::optimize::{golden_section, nelder_mead, NelderMeadOptions};
use serde::{Deserialize, Serialize};

/// Minimum number of exceedances for a free-shape fit.
pub const MIN_EXCEEDANCES: usize = 10;

/// Numerical box for the shape parameter.
pub const XI_BOUNDS: (f64, f64) = (-5.0, 1.0);

const XI_RESTARTS: [f64; 3] = [-0.3, 0.0, 0.3];

/// Shapes closer to zero than this use the exponential-limit formulas.
pub(crate) const XI_ZERO: f64 = 1e-8;

/// Generalized Pareto parameters for exceedances of `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpdParams {
    pub sigma: f64,
    pub xi: f64,
    pub threshold: f64,
}

impl GpdParams {
    pub fn new(sigma: f64, xi: f64, threshold: f64) -> Result<Self> {
        let p = Self { sigma, xi, threshold };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid(format!("GPD scale must be positive, got {}", self.sigma)));
        }
        if !(XI_BOUNDS.0..=XI_BOUNDS.1).contains(&self.xi) {
            return Err(Error::invalid(format!("GPD shape {} outside [{}, {}]", self.xi, XI_BOUNDS.0, XI_BOUNDS.1)));
        }
        if !self.threshold.is_finite() {
            return Err(Error::invalid("GPD threshold must be finite"));
        }
        Ok(())
    }

    /// Finite upper endpoint `u − σ/ξ` for negative shape.
    pub fn upper_endpoint(&self) -> Option<f64> {
        (self.xi < -XI_ZERO).then(|| self.threshold - self.sigma / self.xi)
    }

    /// P(Y > y) for an excess `y = x − u ≥ 0`.
    pub fn excess_survival(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 1.0;
        }
        let z = y / self.sigma;
        if self.xi.abs() < XI_ZERO {
            return (-z).exp();
        }
        let t = self.xi * z;
        if t <= -1.0 {
            return 0.0;
        }
        (-t.ln_1p() / self.xi).exp()
    }

    /// Excess `y` with `P(Y > y) = s`.
    pub fn excess_quantile_from_survival(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return 0.0;
        }
        if s <= 0.0 {
            return match self.upper_endpoint() {
                Some(e) => e - self.threshold,
                None => f64::INFINITY,
            };
        }
        let ls = s.ln();
        if self.xi.abs() < XI_ZERO {
            -self.sigma * ls
        } else {
            self.sigma * (-self.xi * ls).exp_m1() / self.xi
        }
    }

    /// Negative log-likelihood of excesses (values already reduced by the threshold).
    pub fn neg_log_likelihood(&self, excesses: &[f64]) -> f64 {
        gpd_nll(self.sigma, self.xi, excesses)
    }
}

fn gpd_nll(sigma: f64, xi: f64, excesses: &[f64]) -> f64 {
    if !(sigma > 0.0) || !(XI_BOUNDS.0..=XI_BOUNDS.1).contains(&xi) {
        return f64::INFINITY;
    }
    let n = excesses.len() as f64;
    let mut acc = n * sigma.ln();
    if xi.abs() < XI_ZERO {
        acc += excesses.iter().sum::<f64>() / sigma;
        return acc;
    }
    let coef = 1.0 + 1.0 / xi;
    for &y in excesses {
        let t = xi * y / sigma;
        if t <= -1.0 {
            return f64::INFINITY;
        }
        acc += coef * t.ln_1p();
    }
    acc
}

/// Result of a GPD maximum-likelihood fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpdFit {
    pub params: GpdParams,
    pub neg_log_likelihood: f64,
}

fn excesses_of(exceedances: &[f64], threshold: f64) -> Result<Vec<f64>> {
    ensure_finite(exceedances, "exceedances")?;
    if !threshold.is_finite() {
        return Err(Error::invalid("threshold must be finite"));
    }
    if let Some(v) = exceedances.iter().find(|&&v| v <= threshold) {
        return Err(Error::invalid(format!("value {v} is not above threshold {threshold}")));
    }
    Ok(exceedances.iter().map(|v| v - threshold).collect())
}

/// Maximum-likelihood GPD fit to values above `threshold`.
///
/// Minimises the negative log-likelihood over `(log σ, ξ)` with Nelder–Mead,
/// restarting from `ξ ∈ {−0.3, 0, 0.3}` and keeping the best optimum.
pub fn fit_gpd(exceedances: &[f64], threshold: f64) -> Result<GpdFit> {
    if exceedances.len() < MIN_EXCEEDANCES {
        return Err(Error::TooFew {
            needed: MIN_EXCEEDANCES,
            got: exceedances.len(),
            context: "GPD exceedances".into(),
        });
    }
    let excesses = excesses_of(exceedances, threshold)?;
    let mean = excesses.iter().sum::<f64>() / excesses.len() as f64;
    let max = excesses.iter().cloned().fold(0.0, f64::max);

    let objective = |p: &[f64]| gpd_nll(p[0].exp(), p[1], &excesses);
    let opts = NelderMeadOptions { f_tol: 1e-8, x_tol: 1e-8, max_evals: 20_000 };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut any_converged = false;
    for &xi0 in &XI_RESTARTS {
        let mut sigma0 = mean * (1.0 - xi0);
        // keep the start inside the support for negative shapes
        if xi0 < 0.0 {
            sigma0 = sigma0.max(-xi0 * max * 1.05);
        }
        let m = nelder_mead(objective, &[sigma0.ln(), xi0], &[0.2, 0.1], opts);
        any_converged |= m.converged;
        if m.f.is_finite() && best.as_ref().is_none_or(|(_, f)| m.f < *f) {
            best = Some((m.x, m.f));
        }
    }
    let (x, f) = best.ok_or_else(|| Error::NonConvergence("GPD likelihood not finite at any restart".into()))?;
    if !any_converged {
        return Err(Error::NonConvergence("GPD fit did not converge from any restart".into()));
    }
    let params = GpdParams::new(x[0].exp(), x[1], threshold)?;
    Ok(GpdFit { params, neg_log_likelihood: f })
}

/// GPD fit with the shape held at `xi`; only the scale is estimated.
///
/// With `xi = 0` this is the exponential MLE (the mean excess).
pub fn fit_gpd_fixed_shape(exceedances: &[f64], threshold: f64, xi: f64) -> Result<GpdFit> {
    if exceedances.is_empty() {
        return Err(Error::TooFew { needed: 1, got: 0, context: "GPD exceedances".into() });
    }
    if !(XI_BOUNDS.0..=XI_BOUNDS.1).contains(&xi) {
        return Err(Error::invalid(format!("fixed shape {xi} outside bounds")));
    }
    let excesses = excesses_of(exceedances, threshold)?;
    let mean = excesses.iter().sum::<f64>() / excesses.len() as f64;
    let sigma = if xi.abs() < XI_ZERO {
        mean
    } else {
        let max = excesses.iter().cloned().fold(0.0, f64::max);
        let lo = if xi < 0.0 { (-xi * max).max(1e-12 * mean) } else { 1e-6 * mean };
        let hi = 100.0 * mean.max(max);
        let ls = golden_section(|l| gpd_nll(l.exp(), xi, &excesses), lo.ln(), hi.ln(), 1e-14);
        ls.exp()
    };
    let params = GpdParams::new(sigma, xi, threshold)?;
    Ok(GpdFit { params, neg_log_likelihood: gpd_nll(sigma, xi, &excesses) })
}
