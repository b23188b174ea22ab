use crate::error::{Error, Result};

/// Response proxy `hs·|H(tp)|` for a damped single-degree-of-freedom system,
/// `|H(T)| = 1/√((1 − r²)² + (2ζr)²)` with `r = natural_period / T`.
pub fn sdof_response(hs: f64, tp: f64, natural_period: f64, damping_ratio: f64) -> Result<f64> {
    if !(natural_period > 0.0) {
        return Err(Error::invalid("natural period must be positive"));
    }
    if !(damping_ratio > 0.0 && damping_ratio < 1.0) {
        return Err(Error::invalid("damping ratio must lie in (0, 1)"));
    }
    if !(tp > 0.0) {
        return Err(Error::invalid(format!("wave period must be positive, got {tp}")));
    }
    let r = natural_period / tp;
    let gain = 1.0 / ((1.0 - r * r).powi(2) + (2.0 * damping_ratio * r).powi(2)).sqrt();
    Ok(hs * gain)
}
