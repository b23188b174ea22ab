//! Univariate semi-parametric marginals.
//!
//! A [`SemiParametricMarginal`] uses the empirical distribution (plotting
//! position `i/(n+1)`) below a threshold and a generalized Pareto tail above it.
//! It maps observations to the standard Gumbel scale and back, which is the
//! common currency of the conditional extremes model.

mod decluster;
mod gpd;
mod io;
mod semiparametric;

pub use decluster::{decluster, DEFAULT_GAP_HOURS};
pub use gpd::{fit_gpd, fit_gpd_fixed_shape, GpdFit, GpdParams, MIN_EXCEEDANCES, XI_BOUNDS};
pub use io::{read_series_csv, MarginalRecord};
pub use semiparametric::{SemiParametricMarginal, DEFAULT_THRESHOLD_QUANTILE};

use crate::error::{ensure_finite, Error, Result};
use serde::{Deserialize, Serialize};

/// Observations of one variable, optionally time-stamped (seconds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariateSample {
    values: Vec<f64>,
    timestamps: Option<Vec<f64>>,
    label: String,
}

impl UnivariateSample {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        ensure_finite(&values, "sample values")?;
        Ok(Self { values, timestamps: None, label: label.into() })
    }

    pub fn with_timestamps(values: Vec<f64>, timestamps: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        ensure_finite(&values, "sample values")?;
        ensure_finite(&timestamps, "timestamps")?;
        if values.len() != timestamps.len() {
            return Err(Error::invalid(format!(
                "{} values but {} timestamps",
                values.len(),
                timestamps.len()
            )));
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!("timestamps not strictly increasing at index {}", i + 1)));
        }
        Ok(Self { values, timestamps: Some(timestamps), label: label.into() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[f64]> {
        self.timestamps.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Span of the record in years (365.25 d), when timestamps are present.
    pub fn span_years(&self) -> Option<f64> {
        let t = self.timestamps.as_ref()?;
        let span = t.last()? - t.first()?;
        (span > 0.0).then(|| span / (365.25 * 86_400.0))
    }
}
