mod common;

use common::*;
use metocean_joint::condex::{residuals, simulate_conditional_gumbel, GumbelPairSet, HtFit};
use metocean_joint::currents::{harmonic_split, hourly_extrema, principal_axes, HarmonicFitConfig};
use metocean_joint::form::{environmental_contour, point_in_polygon};
use metocean_joint::models::{hn_rosenblatt_chain, sdof_response, structural_reliability, LoadModel, ReliabilityInputs, ResistanceModel};
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn gumbel_roundtrip(seed in 0u64..1000, p in 0.001f64..0.999999) {
        let m = marginal(gpd_sample(1.0, 0.1, 2000, seed), 50.0);
        let x = m.from_gumbel(-(-p.ln()).ln()).unwrap();
        let back = m.from_gumbel(m.to_gumbel(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() < 1e-9 * x.abs().max(1.0));
    }

    #[test]
    fn cdf_monotone_and_bounded(seed in 0u64..1000, a in 0.0f64..20.0, d in 0.0f64..5.0) {
        let m = marginal(gpd_sample(1.0, -0.1, 1000, seed), 10.0);
        let (fa, fb) = (m.cdf(a).unwrap(), m.cdf(a + d).unwrap());
        prop_assert!((0.0..=1.0).contains(&fa) && fa <= fb);
    }

    #[test]
    fn return_value_increases_with_period(seed in 0u64..1000, t in 2.0f64..1e4) {
        let m = marginal(gpd_sample(1.0, 0.05, 1000, seed), 10.0);
        prop_assert!(m.return_value(t).unwrap() < m.return_value(2.0 * t).unwrap());
    }

    #[test]
    fn residual_identity(alpha in 0.01f64..1.0, beta in -1.0f64..1.0, seed in 0u64..1000) {
        let x: Vec<f64> = standard_gumbel(500, seed).iter().map(|v| v.abs() + 0.1).collect();
        let y = standard_gumbel(500, seed + 1);
        let pairs = GumbelPairSet::new(x.clone(), y.clone()).unwrap();
        let z = residuals(alpha, beta, &pairs, 0.0).unwrap();
        for i in 0..x.len() {
            prop_assert!((alpha * x[i] + x[i].powf(beta) * z[i] - y[i]).abs() < 1e-12 * y[i].abs().max(1.0));
        }
    }

    #[test]
    fn simulation_stays_above_bound(bound in 1.0f64..10.0, seed in any::<u64>()) {
        let f = HtFit { alpha: 0.5, beta: 0.2, mu: 0.0, sigma: 1.0, threshold_u: 1.0, residuals: vec![-1.0, 0.0, 1.0] };
        let s = simulate_conditional_gumbel(&f, 200, bound, seed).unwrap();
        prop_assert!(s.iter().all(|(x, _)| *x >= bound));
        prop_assert_eq!(s, simulate_conditional_gumbel(&f, 200, bound, seed).unwrap());
    }

    #[test]
    fn principal_axes_preserve_energy(seed in 0u64..1000, c in -0.9f64..0.9) {
        let (a, b) = gaussian_copula(c, 500, seed);
        let ax = principal_axes(&a, &b).unwrap();
        prop_assert!((0.0..180.0).contains(&ax.major_angle_deg));
        let e0: f64 = a.iter().zip(&b).map(|(x, y)| x * x + y * y).sum();
        let e1: f64 = ax.major.iter().zip(&ax.minor).map(|(x, y)| x * x + y * y).sum();
        prop_assert!((e0 - e1).abs() < 1e-9 * e0);
        let var = |v: &[f64]| { let m = mean(v); v.iter().map(|x| (x - m).powi(2)).sum::<f64>() };
        prop_assert!(var(&ax.major) >= var(&ax.minor) - 1e-9);
    }

    #[test]
    fn hourly_max_not_below_min(seed in 0u64..1000, dt in 60.0f64..3600.0, offset in 0.0f64..3600.0) {
        let n = 300;
        let t: Vec<f64> = (0..n).map(|i| (offset + i as f64 * dt).round()).collect();
        let x = normals(n, seed);
        let h = hourly_extrema(&x, &t).unwrap();
        prop_assert_eq!(h.maxima.len(), h.hours.len());
        prop_assert!(h.maxima.iter().zip(&h.minima).all(|(a, b)| a >= b));
        prop_assert!(h.hours.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn harmonic_split_reconstructs(seed in 0u64..1000) {
        let n = 24 * 40;
        let t: Vec<f64> = (0..n).map(|i| i as f64 * 3600.0).collect();
        let x = normals(n, seed);
        let s = harmonic_split(&x, &t, &HarmonicFitConfig::default()).unwrap();
        for ((a, b), v) in s.tidal.iter().zip(&s.residual).zip(&x) {
            prop_assert!((a + b - v).abs() < 1e-9);
        }
    }

    #[test]
    fn contour_points_on_sphere(t in 1.0f64..1e4, n in 8usize..100) {
        let chain = hn_rosenblatt_chain(&demo_hn()).unwrap();
        let c = environmental_contour(&chain, t, 2922.0, n).unwrap();
        prop_assert_eq!(c.points.len(), n);
        for (u, x) in c.u_points.iter().zip(&c.points) {
            prop_assert!(((u[0] * u[0] + u[1] * u[1]).sqrt() - c.beta).abs() < 1e-12);
            prop_assert!(x[0] > 0.0 && x[1] > 0.0);
        }
    }

    #[test]
    fn point_in_polygon_agrees_with_oracle(px in -2.0f64..2.0, py in -2.0f64..2.0, n in 3usize..40) {
        let poly: Vec<[f64; 2]> = (0..n)
            .map(|i| { let th = std::f64::consts::TAU * i as f64 / n as f64; [th.cos() * (1.0 + 0.3 * (3.0 * th).sin()), th.sin()] })
            .collect();
        prop_assert_eq!(point_in_polygon([px, py], &poly), inside([px, py], &poly));
    }

    #[test]
    fn sdof_linear_in_hs(hs in 0.1f64..20.0, tp in 2.0f64..25.0, k in 0.5f64..3.0) {
        let a = sdof_response(hs, tp, 17.0, 0.1).unwrap();
        let b = sdof_response(k * hs, tp, 17.0, 0.1).unwrap();
        prop_assert!((b - k * a).abs() < 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn reliability_decreases_with_resistance(mr in 1.0f64..6.0, d in 0.1f64..2.0) {
        let p = |m: f64| structural_reliability(
            &ReliabilityInputs::from_models(LoadModel::Normal { mean: 0.0, sd: 1.0 }, ResistanceModel::Normal { mean: m, sd: 1.0 }).unwrap(),
        ).unwrap();
        let (a, b) = (p(mr), p(mr + d));
        prop_assert!((0.0..=1.0).contains(&a) && b < a);
    }
}
