use crate::condex::HtFit;
use crate::error::{Error, Result};
use crate::marginals::SemiParametricMarginal;
use crate::numeric::stats::median;
use serde::{Deserialize, Serialize};

pub const DEFAULT_GAMMA_E: f64 = 1.35;
const BACK_CALC_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvVariable {
    Hs,
    Wind,
    Current,
}

/// Wave height, wind speed and current speed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub hs: f64,
    pub wind: f64,
    pub current: f64,
}

impl Environment {
    pub fn get(&self, v: EnvVariable) -> f64 {
        match v {
            EnvVariable::Hs => self.hs,
            EnvVariable::Wind => self.wind,
            EnvVariable::Current => self.current,
        }
    }

    pub fn set(&mut self, v: EnvVariable, value: f64) {
        match v {
            EnvVariable::Hs => self.hs = value,
            EnvVariable::Wind => self.wind = value,
            EnvVariable::Current => self.current = value,
        }
    }
}

/// `coef · Hs^hs_exp · W^wind_exp · C^current_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseTerm {
    pub coef: f64,
    #[serde(default)]
    pub hs_exp: f64,
    #[serde(default)]
    pub wind_exp: f64,
    #[serde(default)]
    pub current_exp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSurface {
    pub terms: Vec<ResponseTerm>,
}

impl ResponseSurface {
    pub fn new(terms: Vec<ResponseTerm>) -> Result<Self> {
        let rs = Self { terms };
        rs.validate()?;
        Ok(rs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::invalid("response surface needs at least one term"));
        }
        for (k, t) in self.terms.iter().enumerate() {
            if !t.coef.is_finite() {
                return Err(Error::invalid(format!("term {k}: coefficient must be finite")));
            }
            for e in [t.hs_exp, t.wind_exp, t.current_exp] {
                if !(e >= 0.0 && e.is_finite()) {
                    return Err(Error::invalid(format!("term {k}: exponents must be finite and non-negative")));
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, hs: f64, wind: f64, current: f64) -> Result<f64> {
        for (name, v) in [("hs", hs), ("wind", wind), ("current", current)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        // 0^0 = 1 by powf, so absent variables do not zero a term
        Ok(self
            .terms
            .iter()
            .map(|t| t.coef * hs.powf(t.hs_exp) * wind.powf(t.wind_exp) * current.powf(t.current_exp))
            .sum())
    }

    pub fn evaluate_env(&self, env: &Environment) -> Result<f64> {
        self.evaluate(env.hs, env.wind, env.current)
    }
}

/// Value of an associated variable as a function of the dominant one.
pub trait AssociateModel {
    fn value(&self, dominant: f64) -> Result<f64>;
}

impl<F: Fn(f64) -> f64> AssociateModel for F {
    fn value(&self, dominant: f64) -> Result<f64> {
        Ok(self(dominant))
    }
}

/// Conditional median of an associate given the dominant variable, from a
/// conditional extremes fit: `αx + x^β·median(Z)` on the Gumbel scale.
#[derive(Debug, Clone, Copy)]
pub struct ConditionalMedian<'a> {
    pub fit: &'a HtFit,
    pub dominant: &'a SemiParametricMarginal,
    pub associate: &'a SemiParametricMarginal,
}

impl<'a> ConditionalMedian<'a> {
    pub fn new(fit: &'a HtFit, dominant: &'a SemiParametricMarginal, associate: &'a SemiParametricMarginal) -> Result<Self> {
        fit.validate()?;
        Ok(Self { fit, dominant, associate })
    }
}

impl AssociateModel for ConditionalMedian<'_> {
    fn value(&self, dominant: f64) -> Result<f64> {
        let x = self.dominant.to_gumbel(dominant)?;
        if x <= 0.0 {
            return Err(Error::invalid(format!(
                "dominant value {dominant} maps to Gumbel {x} ≤ 0 where the conditional model is undefined"
            )));
        }
        let y = self.fit.conditional_value(x, median(&self.fit.residuals));
        self.associate.from_gumbel(y)
    }
}

/// Finds the environment on which the response equals `target_load`, with the
/// dominant variable searched on `bracket` and the associates following it.
pub fn back_calculate(
    rs: &ResponseSurface,
    target_load: f64,
    dominant: EnvVariable,
    associates: &[(EnvVariable, &dyn AssociateModel)],
    bracket: (f64, f64),
) -> Result<Environment> {
    rs.validate()?;
    if !(target_load.is_finite() && target_load > 0.0) {
        return Err(Error::invalid("target load must be finite and positive"));
    }
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= 0.0) {
        return Err(Error::invalid(format!("invalid search bracket [{lo}, {hi}]")));
    }
    for (v, _) in associates {
        if *v == dominant {
            return Err(Error::invalid(format!("{v:?} is both dominant and associate")));
        }
    }
    let env_at = |d: f64| -> Result<Environment> {
        let mut env = Environment::default();
        env.set(dominant, d);
        for (v, m) in associates {
            env.set(*v, m.value(d)?);
        }
        Ok(env)
    };
    let excess = |d: f64| -> Result<(f64, Environment)> {
        let env = env_at(d)?;
        Ok((rs.evaluate_env(&env)? - target_load, env))
    };

    let (mut a, mut b) = (lo, hi);
    let (fa, env_a) = excess(a)?;
    let (fb, env_b) = excess(b)?;
    if fa == 0.0 {
        return Ok(env_a);
    }
    if fb == 0.0 {
        return Ok(env_b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::invalid(format!(
            "target load {target_load} outside achievable range [{}, {}] on bracket [{lo}, {hi}]",
            (fa + target_load).min(fb + target_load),
            (fa + target_load).max(fb + target_load)
        )));
    }
    let rising = fb > 0.0;
    let mut best = if fa.abs() < fb.abs() { (fa, env_a) } else { (fb, env_b) };
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let (fm, env) = excess(m)?;
        if fm.abs() < best.0.abs() {
            best = (fm, env);
        }
        if fm == 0.0 {
            break;
        }
        if (fm > 0.0) == rising {
            b = m;
        } else {
            a = m;
        }
    }
    if best.0.abs() / target_load >= BACK_CALC_REL_TOL {
        return Err(Error::NonConvergence(format!(
            "back-calculation stalled at relative residual {:e}; response not continuous in the dominant variable?",
            best.0.abs() / target_load
        )));
    }
    Ok(best.1)
}

/// Environmental load factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignFactors {
    pub gamma_e: f64,
}

impl Default for DesignFactors {
    fn default() -> Self {
        Self { gamma_e: DEFAULT_GAMMA_E }
    }
}

impl DesignFactors {
    pub fn new(gamma_e: f64) -> Result<Self> {
        let f = Self { gamma_e };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1.0..=2.0).contains(&self.gamma_e) {
            return Err(Error::invalid(format!("gamma_e {} outside [1, 2]", self.gamma_e)));
        }
        Ok(())
    }
}

pub fn apply_load_factor(load: f64, f: DesignFactors) -> f64 {
    f.gamma_e * load
}
