use crate::error::{Error, Result};
use crate::form::{ConditionalStage, RosenblattChain, Weibull};
use crate::numeric::normal::{norm_cdf, norm_isf, norm_ppf, norm_sf};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    /// Scale (m).
    pub alpha: f64,
    /// Shape.
    pub beta: f64,
}

/// Log-mean of Tp given Hs: `a1 + a2·h^a3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Log-variance of Tp given Hs: `b1 + b2·exp(−b3·h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarCoeffs {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// Weibull Hs with conditional lognormal Tp.
///
/// Field names mirror the configuration keys (`weibull.alpha`, `mu.a1`, …).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaverNutzenModel {
    pub weibull: WeibullParams,
    pub mu: MuCoeffs,
    pub var: VarCoeffs,
}

impl HaverNutzenModel {
    pub fn validate(&self) -> Result<()> {
        let WeibullParams { alpha, beta } = self.weibull;
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::invalid("Weibull scale and shape must be positive"));
        }
        let VarCoeffs { b1, b2, b3 } = self.var;
        if ![b1, b2, b3, self.mu.a1, self.mu.a2, self.mu.a3].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("model coefficients must be finite"));
        }
        // b1 + b2·exp(−b3·h) must stay positive for every h ≥ 0
        let at_zero = b1 + b2;
        let ok = at_zero > 0.0
            && if b3 > 0.0 {
                if b2 > 0.0 { b1 >= 0.0 } else { b1 > 0.0 }
            } else if b3 < 0.0 {
                b2 >= 0.0
            } else {
                true
            };
        if !ok {
            return Err(Error::invalid(format!(
                "conditional variance b1 + b2·exp(−b3·h) = {b1} + {b2}·exp(−{b3}·h) is not positive for all h ≥ 0"
            )));
        }
        Ok(())
    }

    pub fn log_mean(&self, h: f64) -> f64 {
        self.mu.a1 + self.mu.a2 * h.max(0.0).powf(self.mu.a3)
    }

    pub fn log_sd(&self, h: f64) -> f64 {
        (self.var.b1 + self.var.b2 * (-self.var.b3 * h.max(0.0)).exp()).sqrt()
    }

    pub fn hs_stage(&self) -> Weibull {
        Weibull { scale: self.weibull.alpha, shape: self.weibull.beta }
    }
}

/// Lognormal Tp stage conditioned on the Hs value of the previous stage.
#[derive(Debug, Clone, Copy)]
pub struct HnTpStage {
    pub model: HaverNutzenModel,
}

impl HnTpStage {
    fn standardise(&self, t: f64, given: &[f64]) -> f64 {
        let h = given[0];
        (t.ln() - self.model.log_mean(h)) / self.model.log_sd(h)
    }

    fn unstandardise(&self, z: f64, given: &[f64]) -> f64 {
        let h = given[0];
        (self.model.log_mean(h) + self.model.log_sd(h) * z).exp()
    }
}

impl ConditionalStage for HnTpStage {
    fn cdf(&self, t: f64, given: &[f64]) -> f64 {
        if t <= 0.0 { 0.0 } else { norm_cdf(self.standardise(t, given)) }
    }
    fn sf(&self, t: f64, given: &[f64]) -> f64 {
        if t <= 0.0 { 1.0 } else { norm_sf(self.standardise(t, given)) }
    }
    fn quantile(&self, p: f64, given: &[f64]) -> f64 {
        self.unstandardise(norm_ppf(p), given)
    }
    fn isf(&self, q: f64, given: &[f64]) -> f64 {
        self.unstandardise(norm_isf(q), given)
    }
}

/// Two-stage chain: Weibull Hs, then lognormal Tp | Hs.
pub fn hn_rosenblatt_chain(model: &HaverNutzenModel) -> Result<RosenblattChain> {
    model.validate()?;
    Ok(RosenblattChain::new().with_stage(model.hs_stage()).with_stage(HnTpStage { model: *model }))
}
