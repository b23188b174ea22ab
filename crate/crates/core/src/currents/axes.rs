use crate::error::{ensure_finite, Error, Result};

// Relative eigenvalue gap below which the velocity ellipse counts as a circle.
const ISOTROPY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAxes {
    /// Major-axis direction in degrees counter-clockwise from east, in `[0, 180)`.
    pub major_angle_deg: f64,
    pub major: Vec<f64>,
    pub minor: Vec<f64>,
}

/// Rotate velocities onto the principal axes of their covariance.
///
/// An isotropic cloud has no preferred direction; the axes then default to
/// east/north.
pub fn principal_axes(east: &[f64], north: &[f64]) -> Result<PrincipalAxes> {
    if east.len() != north.len() {
        return Err(Error::invalid(format!("{} east samples but {} north samples", east.len(), north.len())));
    }
    if east.len() < 2 {
        return Err(Error::TooFew { needed: 2, got: east.len(), context: "principal axes".into() });
    }
    ensure_finite(east, "east velocity")?;
    ensure_finite(north, "north velocity")?;
    let n = east.len() as f64;
    let me = east.iter().sum::<f64>() / n;
    let mn = north.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (e, v) in east.iter().zip(north) {
        let (de, dn) = (e - me, v - mn);
        sxx += de * de;
        syy += dn * dn;
        sxy += de * dn;
    }
    let trace = sxx + syy;
    if !(trace > 0.0) {
        return Err(Error::invalid("zero-variance velocity series has no principal axes"));
    }
    let gap = ((sxx - syy).powi(2) + 4.0 * sxy * sxy).sqrt();
    let theta = if gap <= ISOTROPY_TOL * trace { 0.0 } else { 0.5 * (2.0 * sxy).atan2(sxx - syy) };
    let mut deg = theta.to_degrees().rem_euclid(180.0);
    if deg >= 180.0 {
        deg = 0.0;
    }
    let (s, c) = deg.to_radians().sin_cos();
    let major = east.iter().zip(north).map(|(e, v)| e * c + v * s).collect();
    let minor = east.iter().zip(north).map(|(e, v)| -e * s + v * c).collect();
    Ok(PrincipalAxes { major_angle_deg: deg, major, minor })
}
