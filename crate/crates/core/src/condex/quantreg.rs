use crate::error::{ensure_finite, Error, Result};
use crate::numeric::optimize::golden_section;
use crate::numeric::stats::{mean, variance};

/// Linear quantile regression `y ≈ intercept + slope · x` at level `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileFit {
    pub intercept: f64,
    pub slope: f64,
    pub tau: f64,
    pub loss: f64,
}

/// Σ ρ_τ(y − a − b x), with ρ_τ(r) = r(τ − 1{r < 0}).
pub fn pinball_loss(x: &[f64], y: &[f64], tau: f64, a: f64, b: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(x, y)| {
            let r = y - a - b * x;
            if r >= 0.0 { tau * r } else { (tau - 1.0) * r }
        })
        .sum()
}

// For a fixed slope the optimal intercept is a τ-quantile of y − b x.
fn best_intercept(x: &[f64], y: &[f64], tau: f64, b: f64) -> f64 {
    let mut r: Vec<f64> = x.iter().zip(y).map(|(x, y)| y - b * x).collect();
    let n = r.len();
    let k = ((tau * n as f64).ceil() as usize).clamp(1, n) - 1;
    let (_, v, _) = r.select_nth_unstable_by(k, f64::total_cmp);
    *v
}

fn profile_loss(x: &[f64], y: &[f64], tau: f64, b: f64) -> f64 {
    pinball_loss(x, y, tau, best_intercept(x, y, tau, b), b)
}

// Walk downhill from `b0` in direction `step`, doubling, until the convex
// function turns up; the minimiser then lies between the last three points.
fn bracket<F: Fn(f64) -> f64>(f: &F, b0: f64, step: f64) -> (f64, f64) {
    let mut prev = b0;
    let mut cur = b0 + step;
    let mut f_cur = f(cur);
    let mut step = step;
    for _ in 0..200 {
        step *= 2.0;
        let next = cur + step;
        let f_next = f(next);
        if f_next >= f_cur {
            return if prev < next { (prev, next) } else { (next, prev) };
        }
        prev = cur;
        cur = next;
        f_cur = f_next;
    }
    if prev < cur { (prev, cur) } else { (cur, prev) }
}

/// Minimise the pinball loss over `(intercept, slope)`.
///
/// The loss profiled over the intercept is convex in the slope, so a bracketing
/// walk plus golden-section search locates the optimum; the answer is then
/// snapped to the best line through pairs of nearly-interpolated points, where
/// the exact optimum of this piecewise-linear problem lies.
pub fn quantile_regression(x: &[f64], y: &[f64], tau: f64) -> Result<QuantileFit> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::invalid(format!("tau {tau} outside (0, 1)")));
    }
    if x.len() != y.len() {
        return Err(Error::invalid("x and y lengths differ"));
    }
    if x.len() < 3 {
        return Err(Error::TooFew { needed: 3, got: x.len(), context: "quantile regression points".into() });
    }
    ensure_finite(x, "x")?;
    ensure_finite(y, "y")?;
    let vx = variance(x);
    if !(vx > 0.0) {
        return Err(Error::invalid("x has zero variance"));
    }
    let (mx, my) = (mean(x), mean(y));
    let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / x.len() as f64;
    let b0 = cov / vx;
    let scale = (variance(y).sqrt() / vx.sqrt()).max(b0.abs()).max(1e-12);

    let f = |b: f64| profile_loss(x, y, tau, b);
    let step0 = 0.1 * scale;
    let f0 = f(b0);
    let (lo, hi) = if f(b0 - step0) < f0 {
        bracket(&f, b0, -step0)
    } else if f(b0 + step0) < f0 {
        bracket(&f, b0, step0)
    } else {
        (b0 - step0, b0 + step0)
    };
    let mut b = golden_section(f, lo, hi, 1e-13);
    let mut a = best_intercept(x, y, tau, b);
    let mut loss = pinball_loss(x, y, tau, a, b);

    let mut near: Vec<(f64, usize)> = x.iter().zip(y).enumerate().map(|(i, (xi, yi))| ((yi - a - b * xi).abs(), i)).collect();
    near.sort_by(|p, q| p.0.total_cmp(&q.0));
    let cand: Vec<usize> = near.iter().take(12).map(|p| p.1).collect();
    for (p, &i) in cand.iter().enumerate() {
        for &j in &cand[p + 1..] {
            if x[i] == x[j] {
                continue;
            }
            let bij = (y[j] - y[i]) / (x[j] - x[i]);
            let aij = y[i] - bij * x[i];
            let l = pinball_loss(x, y, tau, aij, bij);
            if l < loss {
                (a, b, loss) = (aij, bij, l);
            }
        }
    }
    Ok(QuantileFit { intercept: a, slope: b, tau, loss })
}
