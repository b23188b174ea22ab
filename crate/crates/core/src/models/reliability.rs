use crate::error::{Error, Result};
use crate::marginals::GpdParams;
use crate::numeric::normal::{norm_pdf, norm_sf};
use crate::numeric::quadrature::integrate;
use serde::{Deserialize, Serialize};

const MASS_TOL: f64 = 1e-6;
const QUAD_TOL: f64 = 1e-9;

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

pub enum Resistance {
    /// Density `f_R` supported (to within the mass tolerance) on `[lo, hi]`.
    Density { pdf: RealFn, lo: f64, hi: f64 },
    /// Point mass at a known capacity.
    Degenerate(f64),
}

/// Load exceedance function `F̄_E` and resistance for `p_F = ∫ F̄_E(x) f_R(x) dx`.
pub struct ReliabilityInputs {
    pub load_tail: RealFn,
    pub resistance: Resistance,
}

impl ReliabilityInputs {
    pub fn new(load_tail: impl Fn(f64) -> f64 + Send + Sync + 'static, resistance: Resistance) -> Self {
        Self { load_tail: Box::new(load_tail), resistance }
    }
}

impl std::fmt::Debug for ReliabilityInputs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = match &self.resistance {
            Resistance::Density { lo, hi, .. } => format!("Density[{lo}, {hi}]"),
            Resistance::Degenerate(x) => format!("Degenerate({x})"),
        };
        f.debug_struct("ReliabilityInputs").field("resistance", &r).finish_non_exhaustive()
    }
}

/// Probability of failure for independent load and resistance.
pub fn structural_reliability(inputs: &ReliabilityInputs) -> Result<f64> {
    let tail = &inputs.load_tail;
    match &inputs.resistance {
        Resistance::Degenerate(x0) => {
            if !x0.is_finite() {
                return Err(Error::invalid("degenerate resistance must be finite"));
            }
            Ok(tail(*x0).clamp(0.0, 1.0))
        }
        Resistance::Density { pdf, lo, hi } => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(format!("invalid integration domain [{lo}, {hi}]")));
            }
            let mass = integrate(pdf, *lo, *hi, QUAD_TOL)?;
            if (mass - 1.0).abs() > MASS_TOL {
                return Err(Error::invalid(format!(
                    "resistance density integrates to {mass} over [{lo}, {hi}], expected 1 within {MASS_TOL:e}"
                )));
            }
            let p = integrate(|x| tail(x) * pdf(x), *lo, *hi, QUAD_TOL)?;
            if !p.is_finite() {
                return Err(Error::Numerical("non-finite failure probability".into()));
            }
            Ok(p.clamp(0.0, 1.0))
        }
    }
}

/// Parametric load models usable from configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoadModel {
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
    Weibull { scale: f64, shape: f64 },
    Gpd { threshold: f64, sigma: f64, xi: f64 },
}

impl LoadModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            LoadModel::Normal { mean, sd } => mean.is_finite() && sd > 0.0 && sd.is_finite(),
            LoadModel::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            LoadModel::Weibull { scale, shape } => scale > 0.0 && shape > 0.0 && scale.is_finite() && shape.is_finite(),
            LoadModel::Gpd { threshold, sigma, xi } => GpdParams::new(sigma, xi, threshold).is_ok(),
        };
        if ok { Ok(()) } else { Err(Error::invalid(format!("invalid load model {self:?}"))) }
    }

    /// Exceedance probability `P(E > x)`.
    pub fn tail(&self, x: f64) -> f64 {
        match *self {
            LoadModel::Normal { mean, sd } => norm_sf((x - mean) / sd),
            LoadModel::Exponential { rate } => if x <= 0.0 { 1.0 } else { (-rate * x).exp() },
            LoadModel::Weibull { scale, shape } => if x <= 0.0 { 1.0 } else { (-(x / scale).powf(shape)).exp() },
            LoadModel::Gpd { threshold, sigma, xi } => {
                if x <= threshold {
                    1.0
                } else {
                    GpdParams { sigma, xi, threshold }.excess_survival(x - threshold)
                }
            }
        }
    }
}

/// Parametric resistance models usable from configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResistanceModel {
    Normal { mean: f64, sd: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Uniform { lo: f64, hi: f64 },
    Degenerate { value: f64 },
}

impl ResistanceModel {
    pub fn to_resistance(&self) -> Result<Resistance> {
        match *self {
            ResistanceModel::Normal { mean, sd } => {
                if !(sd > 0.0 && mean.is_finite() && sd.is_finite()) {
                    return Err(Error::invalid("normal resistance needs finite mean and sd > 0"));
                }
                Ok(Resistance::Density {
                    pdf: Box::new(move |x| norm_pdf((x - mean) / sd) / sd),
                    lo: mean - 12.0 * sd,
                    hi: mean + 12.0 * sd,
                })
            }
            ResistanceModel::LogNormal { mu, sigma } => {
                if !(sigma > 0.0 && mu.is_finite() && sigma.is_finite()) {
                    return Err(Error::invalid("lognormal resistance needs finite mu and sigma > 0"));
                }
                Ok(Resistance::Density {
                    pdf: Box::new(move |x| if x <= 0.0 { 0.0 } else { norm_pdf((x.ln() - mu) / sigma) / (sigma * x) }),
                    lo: (mu - 12.0 * sigma).exp(),
                    hi: (mu + 12.0 * sigma).exp(),
                })
            }
            ResistanceModel::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::invalid("uniform resistance needs lo < hi"));
                }
                let d = 1.0 / (hi - lo);
                Ok(Resistance::Density { pdf: Box::new(move |x| if (lo..=hi).contains(&x) { d } else { 0.0 }), lo, hi })
            }
            ResistanceModel::Degenerate { value } => Ok(Resistance::Degenerate(value)),
        }
    }
}

impl ReliabilityInputs {
    pub fn from_models(load: LoadModel, resistance: ResistanceModel) -> Result<Self> {
        load.validate()?;
        Ok(Self::new(move |x| load.tail(x), resistance.to_resistance()?))
    }
}
