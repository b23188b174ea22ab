use crate::condex::{simulate_multivariate_gumbel, MultiHtFit};
use crate::error::{Error, Result};
use crate::marginals::SemiParametricMarginal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointExceedance {
    /// Annual rate of events in which every component exceeds its design value.
    pub annual_rate: f64,
    /// Monte Carlo standard error of `annual_rate`.
    pub std_error: f64,
    /// Annual exceedance rate of the conditioning component alone.
    pub conditioning_rate: f64,
    /// Fraction of simulated conditioning exceedances in which all others exceed too.
    pub conditional_fraction: f64,
    pub n_sim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveCombinationReport {
    pub labels: Vec<String>,
    pub return_periods: Vec<f64>,
    /// Componentwise return values.
    pub design_vector: Vec<f64>,
    pub joint: Option<JointExceedance>,
}

/// Componentwise return values and, given a dependence model, the simulated
/// annual rate at which all components exceed them together.
pub fn naive_combination(
    marginals: &[SemiParametricMarginal],
    return_periods: &[f64],
    dependence: Option<&MultiHtFit>,
    n_sim: usize,
    seed: u64,
) -> Result<NaiveCombinationReport> {
    if marginals.len() != return_periods.len() {
        return Err(Error::invalid(format!(
            "{} marginals but {} return periods",
            marginals.len(),
            return_periods.len()
        )));
    }
    if marginals.is_empty() {
        return Err(Error::invalid("no marginals supplied"));
    }
    let design_vector =
        marginals.iter().zip(return_periods).map(|(m, &t)| m.return_value(t)).collect::<Result<Vec<_>>>()?;
    let joint = match dependence {
        None => None,
        Some(fit) => Some(joint_exceedance(marginals, &design_vector, fit, n_sim, seed)?),
    };
    Ok(NaiveCombinationReport {
        labels: marginals.iter().map(|m| m.sample().label().to_string()).collect(),
        return_periods: return_periods.to_vec(),
        design_vector,
        joint,
    })
}

fn joint_exceedance(
    marginals: &[SemiParametricMarginal],
    design: &[f64],
    fit: &MultiHtFit,
    n_sim: usize,
    seed: u64,
) -> Result<JointExceedance> {
    if fit.dimension != marginals.len() {
        return Err(Error::invalid(format!(
            "dependence model has {} components, {} marginals supplied",
            fit.dimension,
            marginals.len()
        )));
    }
    if n_sim == 0 {
        return Err(Error::invalid("n_sim must be positive"));
    }
    let k = fit.conditioning_index;
    let levels = marginals.iter().zip(design).map(|(m, &x)| m.to_gumbel(x)).collect::<Result<Vec<_>>>()?;
    let sims = simulate_multivariate_gumbel(fit, n_sim, levels[k], seed)?;
    let others = fit.others();
    let hits = sims.iter().filter(|row| others.iter().all(|&j| row[j] > levels[j])).count();
    let frac = hits as f64 / n_sim as f64;
    let rate_k = marginals[k].events_per_year() * marginals[k].survival(design[k]);
    Ok(JointExceedance {
        annual_rate: rate_k * frac,
        std_error: rate_k * (frac * (1.0 - frac) / n_sim as f64).sqrt(),
        conditioning_rate: rate_k,
        conditional_fraction: frac,
        n_sim,
    })
}
