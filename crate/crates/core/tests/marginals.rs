mod common;

use common::*;
use metocean_joint::marginals::*;
use std::io::Write;

#[test]
fn gpd_fit_recovers_planted_parameters() {
    for (sigma, xi) in [(1.5, 0.1), (1.0, -0.2), (2.0, 0.0)] {
        let mut xis = Vec::new();
        let mut sigmas = Vec::new();
        for seed in 0..10 {
            let exc: Vec<f64> = gpd_sample(sigma, xi, 5000, 100 + seed).iter().map(|e| 3.0 + e).collect();
            let f = fit_gpd(&exc, 3.0).unwrap();
            xis.push(f.params.xi);
            sigmas.push(f.params.sigma);
        }
        assert!((median(&xis) - xi).abs() < 0.05, "xi {xi}: {}", median(&xis));
        assert!((median(&sigmas) / sigma - 1.0).abs() < 0.05, "sigma {sigma}: {}", median(&sigmas));
    }
}

#[test]
fn gpd_fit_beats_a_grid_of_likelihoods() {
    // the optimum must not be worse than any point on a coarse grid
    let exc: Vec<f64> = gpd_sample(1.2, 0.15, 800, 5).iter().map(|e| 1.0 + e).collect();
    let excess: Vec<f64> = exc.iter().map(|v| v - 1.0).collect();
    let f = fit_gpd(&exc, 1.0).unwrap();
    for i in 0..40 {
        for j in 0..40 {
            let s = 0.6 + i as f64 * 0.03;
            let x = -0.3 + j as f64 * 0.02;
            let p = GpdParams { sigma: s, xi: x, threshold: 1.0 };
            assert!(f.neg_log_likelihood <= p.neg_log_likelihood(&excess) + 1e-9);
        }
    }
}

#[test]
fn fixed_shape_exponential_is_mean_excess() {
    let f = fit_gpd_fixed_shape(&[1.0, 2.0, 3.0], 0.0, 0.0).unwrap();
    assert!((f.params.sigma - 2.0).abs() < 1e-12);
}

#[test]
fn too_few_exceedances_rejected() {
    let e = fit_gpd(&[1.0; 5], 0.5).unwrap_err();
    assert!(e.is_input_error());
}

#[test]
fn tail_fraction_is_exceedance_share() {
    let values: Vec<f64> = (0..1000).map(|i| i as f64).collect();
    let m = SemiParametricMarginal::fit(UnivariateSample::new(values.clone(), "x").unwrap(), 899.5, 1.0).unwrap();
    assert_eq!(m.tail_fraction(), 100.0 / 1000.0);
    let q = SemiParametricMarginal::fit_quantile(UnivariateSample::new(values, "x").unwrap(), 0.95, 1.0).unwrap();
    let exc = q.sample().values().iter().filter(|&&v| v > q.threshold()).count();
    assert_eq!(q.tail_fraction(), exc as f64 / 1000.0);
}

#[test]
fn return_value_matches_closed_form_and_survival() {
    let m = marginal_with_tail((0..500).map(|i| i as f64 / 100.0).collect(), 4.5, 0.8, 0.12, 20.0);
    for t in [10.0, 100.0, 1000.0] {
        let x = m.return_value(t).unwrap();
        let lam = 20.0 * m.tail_fraction();
        let closed = 4.5 + 0.8 / 0.12 * ((lam * t).powf(0.12) - 1.0);
        assert!((x - closed).abs() < 1e-12 * closed);
        // annual exceedance rate at the return value is 1/T
        assert!((20.0 * m.survival(x) * t - 1.0).abs() < 1e-10);
    }
}

#[test]
fn gumbel_roundtrip_in_body_and_tail() {
    let m = marginal(gpd_sample(1.0, 0.1, 4000, 9), 100.0);
    let mut worst = 0.0f64;
    for i in 0..2000 {
        let x = 0.01 + i as f64 * 0.01;
        let back = m.from_gumbel(m.to_gumbel(x).unwrap()).unwrap();
        worst = worst.max((back - x).abs());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn gumbel_transform_is_standard_gumbel_above_threshold() {
    // the Gumbel image of the tail must follow exp(−exp(−y))
    let m = marginal_with_tail((0..1000).map(|i| i as f64 / 1000.0).collect(), 0.9, 0.5, 0.0, 10.0);
    for y in [3.0, 5.0, 8.0, 12.0] {
        let x = m.from_gumbel(y).unwrap();
        let f = m.cdf(x).unwrap();
        assert!((f - (-(-y).exp()).exp()).abs() < 1e-12);
    }
}

#[test]
fn saturation_is_an_error() {
    let m = marginal_with_tail((0..100).map(|i| i as f64).collect(), 89.5, 5.0, -0.5, 1.0);
    // upper endpoint = 89.5 + 10
    assert!(matches!(m.to_gumbel(100.0), Err(metocean_joint::Error::Saturated(_))));
}

#[test]
fn declustering_keeps_one_peak_per_storm() {
    let hour = 3600.0;
    let t: Vec<f64> = (0..200).map(|i| i as f64 * hour).collect();
    let mut v = vec![0.0; 200];
    for (start, peak) in [(10, 5.0), (60, 7.0), (75, 6.0), (150, 4.0)] {
        for k in 0..5 {
            v[start + k] = peak - (k as f64 - 2.0).abs();
        }
    }
    let s = UnivariateSample::with_timestamps(v, t, "hs").unwrap();
    let p = decluster(&s, 1.5, 24.0).unwrap();
    // storms at 60 and 75 are 11 h apart and merge
    assert_eq!(p.values(), &[5.0, 7.0, 4.0]);
    assert_eq!(p.timestamps().unwrap(), &[12.0 * hour, 62.0 * hour, 152.0 * hour]);
}

#[test]
fn csv_reader_sorts_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hs.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "timestamp,value\n2020-01-01T03:00:00Z,2.5\n2020-01-01T00:00:00Z,1.5\n2020-01-01 06:00,3.0").unwrap();
    let s = read_series_csv(&path, "hs").unwrap();
    assert_eq!(s.values(), &[1.5, 2.5, 3.0]);
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "timestamp,value\n2020-01-01,abc\n").unwrap();
    assert!(read_series_csv(&bad, "hs").unwrap_err().is_input_error());
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "timestamp,value\n").unwrap();
    assert!(read_series_csv(&empty, "hs").unwrap_err().is_input_error());
}

#[test]
fn marginal_record_serialises_expected_keys() {
    let m = marginal(gpd_sample(1.0, 0.0, 500, 2), 5.0);
    let rec = MarginalRecord::from(&m);
    let v = serde_json::to_value(&rec).unwrap();
    for k in ["label", "threshold", "sigma", "xi", "tail_fraction", "events_per_year", "n"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}
