use super::simulate::{check_lower_bound, draw_truncated_gumbel};
use super::{fit_ht, GumbelPairSet, BETA_BOUNDS};
use crate::error::{Error, Result};
use crate::marginals::SemiParametricMarginal;
use crate::rng::rng_from_seed;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Conditional extremes fit of all components given component `k`.
///
/// Vectors are indexed over the non-conditioning components in their original
/// order. Residual vectors are stored jointly, one per exceedance of component
/// `k`, so simulation keeps their cross-dependence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiHtFit {
    pub conditioning_index: usize,
    pub dimension: usize,
    pub threshold_u: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub residual_vectors: Vec<Vec<f64>>,
}

impl MultiHtFit {
    /// Indices of the conditioned components.
    pub fn others(&self) -> Vec<usize> {
        (0..self.dimension).filter(|&j| j != self.conditioning_index).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.dimension.checked_sub(1).ok_or_else(|| Error::invalid("dimension must be ≥ 2"))?;
        if m == 0 || self.conditioning_index >= self.dimension {
            return Err(Error::invalid("bad dimension or conditioning index"));
        }
        for v in [&self.alpha, &self.beta, &self.mu, &self.sigma] {
            if v.len() != m {
                return Err(Error::invalid("parameter vectors must have length d − 1"));
            }
        }
        if self.residual_vectors.is_empty() || self.residual_vectors.iter().any(|r| r.len() != m) {
            return Err(Error::invalid("residual vectors missing or of wrong length"));
        }
        for j in 0..m {
            if !(self.alpha[j] > 0.0 && self.alpha[j] <= 1.0)
                || !(BETA_BOUNDS.0..=BETA_BOUNDS.1).contains(&self.beta[j])
                || !(self.sigma[j] > 0.0)
            {
                return Err(Error::invalid(format!("component parameters out of range at position {j}")));
            }
        }
        Ok(())
    }
}

/// Fit every component against component `k` over rows of a Gumbel-scale matrix.
pub fn fit_ht_multivariate(data: &[Vec<f64>], k: usize, threshold_u: f64) -> Result<MultiHtFit> {
    let d = data.first().map(Vec::len).ok_or_else(|| Error::invalid("empty data matrix"))?;
    if d < 2 {
        return Err(Error::invalid("need at least two components"));
    }
    if k >= d {
        return Err(Error::invalid(format!("conditioning index {k} out of range for {d} components")));
    }
    if data.iter().any(|r| r.len() != d) {
        return Err(Error::invalid("ragged data matrix"));
    }
    let xk: Vec<f64> = data.iter().map(|r| r[k]).collect();
    let mut fit = MultiHtFit {
        conditioning_index: k,
        dimension: d,
        threshold_u,
        alpha: Vec::new(),
        beta: Vec::new(),
        mu: Vec::new(),
        sigma: Vec::new(),
        residual_vectors: Vec::new(),
    };
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for j in (0..d).filter(|&j| j != k) {
        let yj: Vec<f64> = data.iter().map(|r| r[j]).collect();
        let pairs = GumbelPairSet::new(xk.clone(), yj)?;
        let f = fit_ht(&pairs, threshold_u).map_err(|e| match e {
            Error::TooFew { needed, got, context } => {
                Error::TooFew { needed, got, context: format!("component {j}: {context}") }
            }
            Error::NonConvergence(m) => Error::NonConvergence(format!("component {j}: {m}")),
            other => Error::Numerical(format!("component {j}: {other}")),
        })?;
        fit.alpha.push(f.alpha);
        fit.beta.push(f.beta);
        fit.mu.push(f.mu);
        fit.sigma.push(f.sigma);
        columns.push(f.residuals);
    }
    let n_exc = columns[0].len();
    fit.residual_vectors = (0..n_exc).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    Ok(fit)
}

/// Simulate `n` Gumbel-scale d-vectors with component `k` above `x_min_gumbel`.
///
/// The draw sequence matches [`super::simulate_conditional_gumbel`]: one
/// truncated-Gumbel draw, then one residual index (a whole residual vector).
pub fn simulate_multivariate_gumbel(fit: &MultiHtFit, n: usize, x_min_gumbel: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    fit.validate()?;
    let x_min = check_lower_bound(x_min_gumbel, fit.threshold_u)?;
    let k = fit.conditioning_index;
    let others = fit.others();
    let m = fit.residual_vectors.len();
    let mut rng = rng_from_seed(seed);
    Ok((0..n)
        .map(|_| {
            let x = draw_truncated_gumbel(&mut rng, x_min);
            let z = &fit.residual_vectors[rng.random_range(0..m)];
            let mut row = vec![0.0; fit.dimension];
            row[k] = x;
            for (pos, &j) in others.iter().enumerate() {
                row[j] = fit.alpha[pos] * x + x.powf(fit.beta[pos]) * z[pos];
            }
            row
        })
        .collect())
}

/// Simulate physical-scale d-vectors, conditioning component above `x_min_physical`.
pub fn simulate_multivariate(
    fit: &MultiHtFit,
    marginals: &[SemiParametricMarginal],
    n: usize,
    x_min_physical: f64,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if marginals.len() != fit.dimension {
        return Err(Error::invalid(format!("{} marginals for {} components", marginals.len(), fit.dimension)));
    }
    let x_min_g = marginals[fit.conditioning_index].to_gumbel(x_min_physical)?;
    simulate_multivariate_gumbel(fit, n, x_min_g, seed)?
        .into_iter()
        .map(|row| row.iter().zip(marginals).map(|(g, m)| m.from_gumbel(*g)).collect())
        .collect()
}
