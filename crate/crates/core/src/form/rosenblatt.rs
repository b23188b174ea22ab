use crate::error::{Error, Result};
use crate::numeric::normal::{norm_cdf, norm_isf, norm_ppf, norm_sf};
use std::fmt::Debug;

/// One stage of a Rosenblatt chain: the distribution of `X_j` given `X_1..X_{j−1}`.
///
/// `sf` and `isf` default to complements of `cdf`/`quantile`; stages with a
/// closed-form upper tail should override them so extreme contours keep full
/// precision.
pub trait ConditionalStage: Debug + Send + Sync {
    fn cdf(&self, x: f64, given: &[f64]) -> f64;

    fn quantile(&self, p: f64, given: &[f64]) -> f64;

    fn sf(&self, x: f64, given: &[f64]) -> f64 {
        1.0 - self.cdf(x, given)
    }

    fn isf(&self, q: f64, given: &[f64]) -> f64 {
        self.quantile(1.0 - q, given)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardNormal;

impl ConditionalStage for StandardNormal {
    fn cdf(&self, x: f64, _: &[f64]) -> f64 {
        norm_cdf(x)
    }
    fn sf(&self, x: f64, _: &[f64]) -> f64 {
        norm_sf(x)
    }
    fn quantile(&self, p: f64, _: &[f64]) -> f64 {
        norm_ppf(p)
    }
    fn isf(&self, q: f64, _: &[f64]) -> f64 {
        norm_isf(q)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Normal {
    pub mean: f64,
    pub sd: f64,
}

impl ConditionalStage for Normal {
    fn cdf(&self, x: f64, _: &[f64]) -> f64 {
        norm_cdf((x - self.mean) / self.sd)
    }
    fn sf(&self, x: f64, _: &[f64]) -> f64 {
        norm_sf((x - self.mean) / self.sd)
    }
    fn quantile(&self, p: f64, _: &[f64]) -> f64 {
        self.mean + self.sd * norm_ppf(p)
    }
    fn isf(&self, q: f64, _: &[f64]) -> f64 {
        self.mean + self.sd * norm_isf(q)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Exponential {
    pub rate: f64,
}

impl ConditionalStage for Exponential {
    fn cdf(&self, x: f64, _: &[f64]) -> f64 {
        if x <= 0.0 { 0.0 } else { -(-self.rate * x).exp_m1() }
    }
    fn sf(&self, x: f64, _: &[f64]) -> f64 {
        if x <= 0.0 { 1.0 } else { (-self.rate * x).exp() }
    }
    fn quantile(&self, p: f64, _: &[f64]) -> f64 {
        -(-p).ln_1p() / self.rate
    }
    fn isf(&self, q: f64, _: &[f64]) -> f64 {
        -q.ln() / self.rate
    }
}

/// Two-parameter Weibull, `F(x) = 1 − exp(−(x/scale)^shape)`.
#[derive(Debug, Clone, Copy)]
pub struct Weibull {
    pub scale: f64,
    pub shape: f64,
}

impl ConditionalStage for Weibull {
    fn cdf(&self, x: f64, _: &[f64]) -> f64 {
        if x <= 0.0 { 0.0 } else { -(-(x / self.scale).powf(self.shape)).exp_m1() }
    }
    fn sf(&self, x: f64, _: &[f64]) -> f64 {
        if x <= 0.0 { 1.0 } else { (-(x / self.scale).powf(self.shape)).exp() }
    }
    fn quantile(&self, p: f64, _: &[f64]) -> f64 {
        self.scale * (-(-p).ln_1p()).powf(1.0 / self.shape)
    }
    fn isf(&self, q: f64, _: &[f64]) -> f64 {
        self.scale * (-q.ln()).powf(1.0 / self.shape)
    }
}

/// Lognormal with log-mean `mu` and log-sd `sigma`.
#[derive(Debug, Clone, Copy)]
pub struct LogNormal {
    pub mu: f64,
    pub sigma: f64,
}

impl ConditionalStage for LogNormal {
    fn cdf(&self, x: f64, _: &[f64]) -> f64 {
        if x <= 0.0 { 0.0 } else { norm_cdf((x.ln() - self.mu) / self.sigma) }
    }
    fn sf(&self, x: f64, _: &[f64]) -> f64 {
        if x <= 0.0 { 1.0 } else { norm_sf((x.ln() - self.mu) / self.sigma) }
    }
    fn quantile(&self, p: f64, _: &[f64]) -> f64 {
        (self.mu + self.sigma * norm_ppf(p)).exp()
    }
    fn isf(&self, q: f64, _: &[f64]) -> f64 {
        (self.mu + self.sigma * norm_isf(q)).exp()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Uniform {
    pub lo: f64,
    pub hi: f64,
}

impl ConditionalStage for Uniform {
    fn cdf(&self, x: f64, _: &[f64]) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
    fn quantile(&self, p: f64, _: &[f64]) -> f64 {
        self.lo + p * (self.hi - self.lo)
    }
}

/// Ordered conditional stages; stage `j` sees the physical values of stages `0..j`.
#[derive(Debug, Default)]
pub struct RosenblattChain {
    stages: Vec<Box<dyn ConditionalStage>>,
}

impl RosenblattChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_stage(mut self, stage: impl ConditionalStage + 'static) -> Self {
        self.stages.push(Box::new(stage));
        self
    }

    pub fn push(&mut self, stage: Box<dyn ConditionalStage>) {
        self.stages.push(stage);
    }

    /// Independent standard normals in `dim` dimensions (the identity map).
    pub fn standard_normal(dim: usize) -> Self {
        let mut c = Self::new();
        for _ in 0..dim {
            c.push(Box::new(StandardNormal));
        }
        c
    }

    pub fn dimension(&self) -> usize {
        self.stages.len()
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.stages.len() {
            return Err(Error::invalid(format!("vector of length {} for a {}-stage chain", v.len(), self.stages.len())));
        }
        Ok(())
    }

    /// Physical point to standard-normal space.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut u = Vec::with_capacity(x.len());
        for (j, stage) in self.stages.iter().enumerate() {
            let given = &x[..j];
            let p = stage.cdf(x[j], given);
            if p <= 0.0 {
                return Err(Error::Saturated(p));
            }
            let uj = if p <= 0.5 {
                norm_ppf(p)
            } else {
                let q = stage.sf(x[j], given);
                if q <= 0.0 {
                    return Err(Error::Saturated(1.0));
                }
                norm_isf(q)
            };
            u.push(uj);
        }
        Ok(u)
    }

    /// Standard-normal point to physical space.
    pub fn inverse(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(u)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("rosenblatt_inverse: non-finite coordinate"));
        }
        let mut x: Vec<f64> = Vec::with_capacity(u.len());
        for (j, stage) in self.stages.iter().enumerate() {
            let xj = if u[j] <= 0.0 {
                stage.quantile(norm_cdf(u[j]), &x)
            } else {
                stage.isf(norm_sf(u[j]), &x)
            };
            x.push(xj);
        }
        Ok(x)
    }
}
