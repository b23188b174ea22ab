use super::gpd::{fit_gpd, GpdParams, XI_ZERO};
use super::UnivariateSample;
use crate::error::{Error, Result};
use crate::numeric::stats::{quantile_sorted, sorted};

pub const DEFAULT_THRESHOLD_QUANTILE: f64 = 0.95;

/// Empirical body below the threshold, GPD tail above it.
///
/// The body CDF interpolates linearly between plotting positions `i/(n+1)` of
/// the sorted sample values strictly below the threshold, and ends at the knot
/// `(u, 1 − tail_fraction)` so the CDF is continuous at the threshold. Below
/// the sample minimum the CDF is held at the first plotting position, which
/// keeps every probability strictly inside (0, 1).
#[derive(Debug, Clone)]
pub struct SemiParametricMarginal {
    sample: UnivariateSample,
    gpd: GpdParams,
    tail_fraction: f64,
    events_per_year: f64,
    knots_x: Vec<f64>,
    knots_p: Vec<f64>,
}

impl SemiParametricMarginal {
    /// Fit with the threshold at sample quantile `threshold_quantile`.
    pub fn fit_quantile(sample: UnivariateSample, threshold_quantile: f64, events_per_year: f64) -> Result<Self> {
        if !(threshold_quantile > 0.0 && threshold_quantile < 1.0) {
            return Err(Error::invalid(format!("threshold quantile {threshold_quantile} outside (0, 1)")));
        }
        if sample.is_empty() {
            return Err(Error::TooFew { needed: 1, got: 0, context: "marginal sample".into() });
        }
        let u = quantile_sorted(&sorted(sample.values()), threshold_quantile);
        Self::fit(sample, u, events_per_year)
    }

    /// Fit the GPD tail above `threshold`.
    pub fn fit(sample: UnivariateSample, threshold: f64, events_per_year: f64) -> Result<Self> {
        let exceedances: Vec<f64> = sample.values().iter().copied().filter(|&v| v > threshold).collect();
        let gpd = fit_gpd(&exceedances, threshold)?.params;
        Self::from_parts(sample, gpd, events_per_year)
    }

    /// Assemble from already-known tail parameters.
    pub fn from_parts(sample: UnivariateSample, gpd: GpdParams, events_per_year: f64) -> Result<Self> {
        gpd.validate()?;
        if !(events_per_year > 0.0 && events_per_year.is_finite()) {
            return Err(Error::invalid(format!("events_per_year must be positive, got {events_per_year}")));
        }
        let n = sample.len();
        if n == 0 {
            return Err(Error::TooFew { needed: 1, got: 0, context: "marginal sample".into() });
        }
        let u = gpd.threshold;
        let k = sample.values().iter().filter(|&&v| v > u).count();
        if k == 0 {
            return Err(Error::invalid("no sample values exceed the threshold"));
        }
        let tail_fraction = k as f64 / n as f64;

        let s = sorted(sample.values());
        let denom = (n + 1) as f64;
        let mut knots_x: Vec<f64> = Vec::new();
        let mut knots_p: Vec<f64> = Vec::new();
        for (i, &x) in s.iter().enumerate() {
            if x >= u {
                break;
            }
            let p = (i + 1) as f64 / denom;
            if knots_x.last() == Some(&x) {
                *knots_p.last_mut().expect("non-empty") = p;
            } else {
                knots_x.push(x);
                knots_p.push(p);
            }
        }
        knots_x.push(u);
        knots_p.push(1.0 - tail_fraction);

        Ok(Self { sample, gpd, tail_fraction, events_per_year, knots_x, knots_p })
    }

    pub fn sample(&self) -> &UnivariateSample {
        &self.sample
    }

    pub fn gpd(&self) -> &GpdParams {
        &self.gpd
    }

    pub fn threshold(&self) -> f64 {
        self.gpd.threshold
    }

    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    pub fn events_per_year(&self) -> f64 {
        self.events_per_year
    }

    /// Upper-tail probability `1 − F(x)`, computed without cancellation in the tail.
    pub fn survival(&self, x: f64) -> f64 {
        if x > self.gpd.threshold {
            self.tail_fraction * self.gpd.excess_survival(x - self.gpd.threshold)
        } else {
            1.0 - self.body_cdf(x)
        }
    }

    fn body_cdf(&self, x: f64) -> f64 {
        let kx = &self.knots_x;
        let kp = &self.knots_p;
        if x <= kx[0] {
            return kp[0];
        }
        let j = kx.partition_point(|&k| k < x);
        if j >= kx.len() {
            return kp[kp.len() - 1];
        }
        let (x0, x1) = (kx[j - 1], kx[j]);
        let (p0, p1) = (kp[j - 1], kp[j]);
        p0 + (p1 - p0) * (x - x0) / (x1 - x0)
    }

    fn body_quantile(&self, p: f64) -> f64 {
        let kx = &self.knots_x;
        let kp = &self.knots_p;
        if p <= kp[0] {
            return kx[0];
        }
        let j = kp.partition_point(|&k| k < p);
        if j >= kp.len() {
            return kx[kx.len() - 1];
        }
        let (x0, x1) = (kx[j - 1], kx[j]);
        let (p0, p1) = (kp[j - 1], kp[j]);
        x0 + (x1 - x0) * (p - p0) / (p1 - p0)
    }

    /// Semi-parametric CDF.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::invalid("marginal_cdf: non-finite argument"));
        }
        if x > self.gpd.threshold {
            Ok(1.0 - self.survival(x))
        } else {
            Ok(self.body_cdf(x))
        }
    }

    /// Map a physical value to the standard Gumbel scale, `−log(−log F(x))`.
    pub fn to_gumbel(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::invalid("to_gumbel: non-finite argument"));
        }
        let neg_log_f = if x > self.gpd.threshold {
            let q = self.survival(x);
            if q <= 0.0 {
                return Err(Error::Saturated(1.0));
            }
            -(-q).ln_1p()
        } else {
            let p = self.body_cdf(x);
            if p <= 0.0 || p >= 1.0 {
                return Err(Error::Saturated(p));
            }
            -p.ln()
        };
        if neg_log_f <= 0.0 {
            return Err(Error::Saturated(1.0));
        }
        Ok(-neg_log_f.ln())
    }

    /// Map a standard Gumbel value back to the physical scale.
    pub fn from_gumbel(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::invalid("from_gumbel: NaN argument"));
        }
        let q = -(-(-y).exp()).exp_m1();
        if q < self.tail_fraction {
            let s = q / self.tail_fraction;
            Ok(self.gpd.threshold + self.gpd.excess_quantile_from_survival(s))
        } else {
            Ok(self.body_quantile(1.0 - q))
        }
    }

    /// Level exceeded on average once every `return_period_years`.
    pub fn return_value(&self, return_period_years: f64) -> Result<f64> {
        let lambda_t = self.events_per_year * self.tail_fraction * return_period_years;
        if !(lambda_t >= 1.0) || !lambda_t.is_finite() {
            return Err(Error::invalid(format!(
                "return period {return_period_years} y too short for the tail model (λT = {lambda_t})"
            )));
        }
        let GpdParams { sigma, xi, threshold } = self.gpd;
        if xi.abs() < XI_ZERO {
            Ok(threshold + sigma * lambda_t.ln())
        } else {
            Ok(threshold + sigma / xi * (lambda_t.powf(xi) - 1.0))
        }
    }
}
