use super::RosenblattChain;
use crate::error::{Error, Result};
use crate::io::numeric_csv;
use crate::numeric::normal::norm_isf;
use serde::{Deserialize, Serialize};

/// Three-hour sea states.
pub const DEFAULT_STATES_PER_YEAR: f64 = 2922.0;

/// Closed inverse-FORM contour, points ordered by angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentalContour {
    pub return_period_years: f64,
    pub states_per_year: f64,
    pub beta: f64,
    pub angles_deg: Vec<f64>,
    pub u_points: Vec<[f64; 2]>,
    pub points: Vec<[f64; 2]>,
}

/// Map the circle of radius `β = Φ⁻¹(1 − 1/(T·N))` through the inverse chain.
///
/// Point `i` sits at angle `2πi/n_points`, so the first point has `u₂ = 0`.
pub fn environmental_contour(
    chain: &RosenblattChain,
    return_period_years: f64,
    states_per_year: f64,
    n_points: usize,
) -> Result<EnvironmentalContour> {
    if chain.dimension() != 2 {
        return Err(Error::invalid("environmental contours need a 2-stage chain"));
    }
    if n_points < 8 {
        return Err(Error::invalid(format!("need at least 8 contour points, got {n_points}")));
    }
    let events = return_period_years * states_per_year;
    if !(events > 1.0) || !events.is_finite() {
        return Err(Error::invalid(format!("return period × states per year must exceed 1, got {events}")));
    }
    let beta = norm_isf(1.0 / events);
    let mut angles_deg = Vec::with_capacity(n_points);
    let mut u_points = Vec::with_capacity(n_points);
    let mut points = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let th = std::f64::consts::TAU * i as f64 / n_points as f64;
        let u = if i == 0 { [beta, 0.0] } else { [beta * th.cos(), beta * th.sin()] };
        let x = chain.inverse(&u)?;
        angles_deg.push(360.0 * i as f64 / n_points as f64);
        u_points.push(u);
        points.push([x[0], x[1]]);
    }
    Ok(EnvironmentalContour { return_period_years, states_per_year, beta, angles_deg, u_points, points })
}

/// `angle_deg,u1,u2,x1,x2` rows.
pub fn contour_csv(c: &EnvironmentalContour) -> String {
    numeric_csv(
        &["angle_deg", "u1", "u2", "x1", "x2"],
        (0..c.points.len()).map(|i| vec![c.angles_deg[i], c.u_points[i][0], c.u_points[i][1], c.points[i][0], c.points[i][1]]),
    )
}

/// Even-odd ray casting test; points on an edge count as inside.
pub fn point_in_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        let within = p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1]);
        if cross == 0.0 && within {
            return true;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let xi = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < xi {
                inside = !inside;
            }
        }
    }
    inside
}

/// Every point of each contour lies inside the next longer-return-period one.
/// Returns the offending return-period pair on failure.
pub fn check_nesting(contours: &[EnvironmentalContour]) -> std::result::Result<(), (f64, f64)> {
    let mut sorted: Vec<&EnvironmentalContour> = contours.iter().collect();
    sorted.sort_by(|a, b| a.return_period_years.total_cmp(&b.return_period_years));
    for w in sorted.windows(2) {
        if !w[0].points.iter().all(|p| point_in_polygon(*p, &w[1].points)) {
            return Err((w[0].return_period_years, w[1].return_period_years));
        }
    }
    Ok(())
}
