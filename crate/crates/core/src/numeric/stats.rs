//! Descriptive statistics on slices.

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Population variance (divisor n).
pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64
}

pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Linear-interpolation quantile (Hyndman–Fan type 7) of pre-sorted data.
pub fn quantile_sorted(s: &[f64], p: f64) -> f64 {
    let n = s.len();
    if n == 1 {
        return s[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    s[lo] + (h - lo as f64) * (s[hi] - s[lo])
}

pub fn quantile(v: &[f64], p: f64) -> f64 {
    quantile_sorted(&sorted(v), p)
}

pub fn median(v: &[f64]) -> f64 {
    quantile(v, 0.5)
}

/// Mode of a histogram whose bin width follows the Freedman–Diaconis rule.
///
/// Returns the centre of the fullest bin; the lowest such bin wins ties.
pub fn histogram_mode(v: &[f64]) -> f64 {
    let s = sorted(v);
    let n = s.len();
    let (lo, hi) = (s[0], s[n - 1]);
    let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
    let width = 2.0 * iqr / (n as f64).cbrt();
    if !(width > 0.0) || hi <= lo {
        return median(&s);
    }
    let bins = (((hi - lo) / width).ceil() as usize).clamp(1, 100_000);
    let mut counts = vec![0usize; bins];
    for x in &s {
        let b = (((x - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let mut best = 0;
    for (i, c) in counts.iter().enumerate() {
        if *c > counts[best] {
            best = i;
        }
    }
    lo + (best as f64 + 0.5) * width
}
