use super::GumbelPairSet;
use crate::error::{Error, Result};
use crate::numeric::optimize::{nelder_mead, NelderMeadOptions};
use serde::{Deserialize, Serialize};

pub const MIN_HT_EXCEEDANCES: usize = 10;
pub const BETA_BOUNDS: (f64, f64) = (-5.0, 1.0);
pub const ALPHA_STARTS: [f64; 3] = [0.2, 0.5, 0.9];
pub const BETA_STARTS: [f64; 2] = [0.0, 0.3];

// Residual scale floor; reached only for (near-)deterministic dependence.
const SIGMA_FLOOR: f64 = 1e-10;

/// Fitted conditional extremes parameters and the empirical residual set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HtFit {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
    pub threshold_u: f64,
    pub residuals: Vec<f64>,
}

impl HtFit {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::invalid(format!("alpha {} outside (0, 1]", self.alpha)));
        }
        if !(BETA_BOUNDS.0..=BETA_BOUNDS.1).contains(&self.beta) {
            return Err(Error::invalid(format!("beta {} outside [-5, 1]", self.beta)));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::invalid("sigma must be positive"));
        }
        if self.residuals.is_empty() {
            return Err(Error::invalid("empty residual set"));
        }
        Ok(())
    }

    /// `αx + x^β z` on the Gumbel scale.
    pub fn conditional_value(&self, x: f64, z: f64) -> f64 {
        self.alpha * x + x.powf(self.beta) * z
    }
}

fn in_box(alpha: f64, beta: f64) -> bool {
    alpha > 0.0 && alpha <= 1.0 && (BETA_BOUNDS.0..=BETA_BOUNDS.1).contains(&beta)
}

/// Profile negative log-likelihood in `(α, β)`, with `(μ, σ)` at their
/// closed-form optimum. Returns `(nll, μ, σ)`.
fn profile(alpha: f64, beta: f64, x: &[f64], log_x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    if !in_box(alpha, beta) {
        return (f64::INFINITY, f64::NAN, f64::NAN);
    }
    let n = x.len() as f64;
    let mut sum_z = 0.0;
    let mut sum_logw = 0.0;
    for i in 0..x.len() {
        let w = (beta * log_x[i]).exp();
        sum_z += (y[i] - alpha * x[i]) / w;
        sum_logw += beta * log_x[i];
    }
    let mu = sum_z / n;
    let mut ss = 0.0;
    for i in 0..x.len() {
        let w = (beta * log_x[i]).exp();
        let d = (y[i] - alpha * x[i]) / w - mu;
        ss += d * d;
    }
    let sigma = (ss / n).sqrt().max(SIGMA_FLOOR);
    let nll = sum_logw + n * sigma.ln() + ss / (2.0 * sigma * sigma);
    (nll, mu, sigma)
}

/// Pseudo-likelihood objective of the Gaussian working model at `(α, β)`,
/// profiled over `(μ, σ)`, for the exceedances of `threshold_u`.
pub fn ht_objective(alpha: f64, beta: f64, pairs: &GumbelPairSet, threshold_u: f64) -> f64 {
    let (x, y) = pairs.exceedances(threshold_u);
    let log_x: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    profile(alpha, beta, &x, &log_x, &y).0
}

/// Residuals `ẑ_i = (y_i − αx_i) / x_i^β` for the pairs with `x > threshold_u`.
pub fn residuals(alpha: f64, beta: f64, pairs: &GumbelPairSet, threshold_u: f64) -> Result<Vec<f64>> {
    let (x, y) = pairs.exceedances(threshold_u);
    if let Some(bad) = x.iter().find(|&&v| v <= 0.0) {
        return Err(Error::invalid(format!(
            "exceedance x = {bad} is not positive; threshold {threshold_u} too low for the Gumbel-scale model"
        )));
    }
    Ok(x.iter().zip(&y).map(|(x, y)| (y - alpha * x) / x.powf(beta)).collect())
}

/// Fit `(α, β, μ, σ)` by maximising the Gaussian pseudo-likelihood over the
/// exceedances of `threshold_u`.
///
/// Nelder–Mead in `(α, β)` on the profile likelihood, restarted from every
/// combination of [`ALPHA_STARTS`] × [`BETA_STARTS`]; the best optimum wins and
/// earlier starts win ties. Exceedances are sorted internally, so the result
/// does not depend on input order.
pub fn fit_ht(pairs: &GumbelPairSet, threshold_u: f64) -> Result<HtFit> {
    if !threshold_u.is_finite() {
        return Err(Error::invalid("threshold must be finite"));
    }
    let (ex, ey) = pairs.exceedances(threshold_u);
    if ex.len() < MIN_HT_EXCEEDANCES {
        return Err(Error::TooFew {
            needed: MIN_HT_EXCEEDANCES,
            got: ex.len(),
            context: format!("conditional extremes exceedances of u = {threshold_u}"),
        });
    }
    if let Some(bad) = ex.iter().find(|&&v| v <= 0.0) {
        return Err(Error::invalid(format!(
            "exceedance x = {bad} is not positive; threshold {threshold_u} too low for the Gumbel-scale model"
        )));
    }

    let mut order: Vec<usize> = (0..ex.len()).collect();
    order.sort_by(|&a, &b| ex[a].total_cmp(&ex[b]).then(ey[a].total_cmp(&ey[b])));
    let x: Vec<f64> = order.iter().map(|&i| ex[i]).collect();
    let y: Vec<f64> = order.iter().map(|&i| ey[i]).collect();
    let log_x: Vec<f64> = x.iter().map(|v| v.ln()).collect();

    let objective = |p: &[f64]| profile(p[0], p[1], &x, &log_x, &y).0;
    let opts = NelderMeadOptions { f_tol: 1e-8, x_tol: 1e-8, max_evals: 10_000 };

    let mut best: Option<(f64, f64, f64)> = None;
    let mut any_converged = false;
    for &a0 in &ALPHA_STARTS {
        for &b0 in &BETA_STARTS {
            let m = nelder_mead(objective, &[a0, b0], &[0.05, 0.1], opts);
            any_converged |= m.converged;
            if m.f.is_finite() && best.is_none_or(|(_, _, f)| m.f < f) {
                best = Some((m.x[0], m.x[1], m.f));
            }
        }
    }
    let (alpha, beta, _) = best.ok_or_else(|| Error::NonConvergence("pseudo-likelihood not finite at any start".into()))?;
    if !any_converged {
        return Err(Error::NonConvergence("conditional extremes fit did not converge from any start".into()));
    }
    let (_, mu, sigma) = profile(alpha, beta, &x, &log_x, &y);
    let residuals = residuals(alpha, beta, pairs, threshold_u)?;
    let fit = HtFit { alpha, beta, mu, sigma, threshold_u, residuals };
    fit.validate()?;
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_formula() {
        let p = GumbelPairSet::new(vec![10.0], vec![10.0]).unwrap();
        assert_eq!(residuals(1.0, 0.0, &p, 0.0).unwrap(), vec![0.0]);
        let p = GumbelPairSet::new(vec![4.0], vec![3.0]).unwrap();
        assert_eq!(residuals(0.5, 0.5, &p, 0.0).unwrap(), vec![0.5]);
    }

    #[test]
    fn residuals_need_positive_x() {
        let p = GumbelPairSet::new(vec![-0.5, 2.0], vec![1.0, 1.0]).unwrap();
        assert!(residuals(0.5, 0.5, &p, -1.0).is_err());
        assert_eq!(residuals(0.5, 0.5, &p, 0.0).unwrap().len(), 1);
    }

    #[test]
    fn too_few_exceedances() {
        let x: Vec<f64> = (0..30).map(|i| i as f64 / 10.0).collect();
        let p = GumbelPairSet::new(x.clone(), x).unwrap();
        assert!(matches!(fit_ht(&p, 2.5), Err(Error::TooFew { .. })));
    }

    #[test]
    fn perfect_dependence() {
        let x: Vec<f64> = (0..200).map(|i| 3.0 + i as f64 / 40.0).collect();
        let p = GumbelPairSet::new(x.clone(), x).unwrap();
        let f = fit_ht(&p, 3.0).unwrap();
        assert!((f.alpha - 1.0).abs() < 0.02, "alpha {}", f.alpha);
        let lo = f.residuals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(hi - lo < 1e-6, "spread {}", hi - lo);
    }

    #[test]
    fn validate_rejects_out_of_range() {
        let mut f = HtFit { alpha: 0.5, beta: 0.2, mu: 0.0, sigma: 1.0, threshold_u: 1.0, residuals: vec![0.1] };
        assert!(f.validate().is_ok());
        f.alpha = 1.2;
        assert!(f.validate().is_err());
        f.alpha = 0.5;
        f.residuals.clear();
        assert!(f.validate().is_err());
    }
}
