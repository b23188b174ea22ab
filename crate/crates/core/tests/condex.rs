mod common;

use common::*;
use metocean_joint::condex::*;

fn u95() -> f64 {
    gumbel_quantile(0.95)
}

#[test]
fn dependence_ladder_is_monotone() {
    let alphas: Vec<f64> = [0.2, 0.5, 0.8]
        .iter()
        .map(|&rho| fit_ht(&copula_pairs(rho, 100_000, 42), u95()).unwrap().alpha)
        .collect();
    assert!(alphas[0] < alphas[1] && alphas[1] < alphas[2], "{alphas:?}");
}

#[test]
fn independent_fixture_gives_weak_dependence() {
    let p = GumbelPairSet::new(standard_gumbel(100_000, 70), standard_gumbel(100_000, 71)).unwrap();
    let f = fit_ht(&p, u95()).unwrap();
    assert!(f.alpha < 0.1 && f.beta < 0.3, "{} {}", f.alpha, f.beta);
}

#[test]
fn comonotone_fixture_gives_alpha_near_one() {
    let x = standard_gumbel(20_000, 3);
    let f = fit_ht(&GumbelPairSet::new(x.clone(), x).unwrap(), u95()).unwrap();
    assert!(f.alpha >= 0.98, "{}", f.alpha);
}

#[test]
fn planted_parameters_recovered() {
    let (x, y) = planted_pairs(0.6, 0.3, 200_000, 8);
    let f = fit_ht(&GumbelPairSet::new(x, y).unwrap(), u95()).unwrap();
    assert!((f.alpha - 0.6).abs() < 0.05, "{}", f.alpha);
    assert!((f.beta - 0.3).abs() < 0.15, "{}", f.beta);
}

#[test]
fn residual_identity_holds_exactly() {
    let pairs = copula_pairs(0.5, 20_000, 1);
    let f = fit_ht(&pairs, u95()).unwrap();
    let (ex, ey) = pairs.exceedances(u95());
    assert_eq!(ex.len(), f.residuals.len());
    for ((x, y), z) in ex.iter().zip(&ey).zip(&f.residuals) {
        assert!((f.alpha * x + x.powf(f.beta) * z - y).abs() < 1e-12);
    }
}

#[test]
fn fit_ignores_input_order() {
    let pairs = copula_pairs(0.5, 5_000, 2);
    let n = pairs.len();
    let perm: Vec<usize> = (0..n).rev().collect();
    let shuffled = GumbelPairSet::new(perm.iter().map(|&i| pairs.x()[i]).collect(), perm.iter().map(|&i| pairs.y()[i]).collect()).unwrap();
    let (a, b) = (fit_ht(&pairs, u95()).unwrap(), fit_ht(&shuffled, u95()).unwrap());
    assert_eq!((a.alpha, a.beta, a.mu, a.sigma), (b.alpha, b.beta, b.mu, b.sigma));
}

#[test]
fn directional_sectors_separate_dependence() {
    let (x1, y1) = planted_pairs(0.9, 0.1, 40_000, 10);
    let (x2, y2) = planted_pairs(0.1, 0.1, 40_000, 20);
    let theta: Vec<f64> = (0..80_000).map(|i| if i < 40_000 { 45.0 } else { 225.0 }).collect();
    let h = [x1, x2].concat();
    let t = [y1, y2].concat();
    let d = fit_ht_directional(&h, &t, &theta, &[Sector::new(0.0, 180.0), Sector::new(180.0, 360.0)], u95()).unwrap();
    let (a0, a1) = (d.fit_for(45.0).unwrap().alpha, d.fit_for(225.0).unwrap().alpha);
    assert!(a0 - a1 > 0.3, "{a0} {a1}");
}

#[test]
fn single_sector_equals_pooled() {
    let pairs = copula_pairs(0.5, 20_000, 5);
    let theta: Vec<f64> = (0..pairs.len()).map(|i| (i * 37 % 360) as f64).collect();
    let pooled = fit_ht(&pairs, u95()).unwrap();
    let d = fit_ht_directional(pairs.x(), pairs.y(), &theta, &[Sector::new(0.0, 360.0)], u95()).unwrap();
    let single = d.sectors[0].fit.as_ref().unwrap();
    assert_eq!(&pooled, single);
    let a = simulate_conditional_gumbel(&pooled, 1000, 4.0, 77).unwrap();
    let b = simulate_conditional_gumbel(single, 1000, 4.0, 77).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sparse_sector_is_an_error() {
    let pairs = copula_pairs(0.5, 2_000, 5);
    let mut theta = vec![10.0; pairs.len()];
    theta[0] = 200.0;
    theta[1] = 210.0;
    let r = fit_ht_directional(pairs.x(), pairs.y(), &theta, &[Sector::new(0.0, 180.0), Sector::new(180.0, 360.0)], -10.0);
    assert!(r.is_err());
}

#[test]
fn simulation_respects_lower_bound() {
    let f = fit_ht(&copula_pairs(0.5, 20_000, 6), u95()).unwrap();
    let s = simulate_conditional_gumbel(&f, 5000, 6.0, 1).unwrap();
    assert!(s.iter().all(|(x, _)| *x > 6.0));
    // the excess over the bound is standard exponential in the far tail
    let m = mean(&s.iter().map(|(x, _)| x - 6.0).collect::<Vec<_>>());
    assert!((m - 1.0).abs() < 0.05, "{m}");
}

// Median of y given x above `x0`, integrating the conditional CDF against the
// truncated Gumbel density of x.
fn median_oracle(f: &HtFit, x0: f64) -> f64 {
    let sf0 = 1.0 - gumbel_cdf(x0);
    let n = 40_000;
    let h = 30.0 / n as f64;
    let cdf = |y: f64| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            let x = x0 + (i as f64 + 0.5) * h;
            let dens = (-x).exp() * (-(-x).exp()).exp() / sf0;
            let frac = f.residuals.iter().filter(|&&z| f.alpha * x + x.powf(f.beta) * z <= y).count() as f64
                / f.residuals.len() as f64;
            acc += dens * frac * h;
        }
        acc
    };
    let (mut lo, mut hi) = (-20.0, 60.0);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < 0.5 { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

#[test]
fn return_curve_median_matches_integral() {
    let z = normals(40, 3);
    let f = HtFit { alpha: 0.5, beta: 0.3, mu: 0.0, sigma: 1.0, threshold_u: 2.0, residuals: z };
    let m = marginal(gpd_sample(1.0, 0.05, 5000, 1), 50.0);
    let c = conditional_return_curve(&f, &m, &m, 0.01, 200_000, 9, None).unwrap();
    let oracle = median_oracle(&f, c.x_return_gumbel);
    assert!((c.median_y_gumbel - oracle).abs() < 0.02, "{} {oracle}", c.median_y_gumbel);
    assert_eq!(c.band_lo, c.median_y);
}

#[test]
fn bootstrap_is_thread_count_invariant() {
    let pairs = copula_pairs(0.5, 10_000, 12);
    let f = fit_ht(&pairs, u95()).unwrap();
    let m = marginal(gpd_sample(1.0, 0.0, 10_000, 2), 100.0);
    let b = Some(Bootstrap { pairs: &pairs, replicates: 16 });
    let par = conditional_return_curve(&f, &m, &m, 0.01, 500, 4, b).unwrap();
    let seq = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| conditional_return_curve(&f, &m, &m, 0.01, 500, 4, b).unwrap());
    assert_eq!(par, seq);
    assert!(par.band_lo <= par.band_hi);
}

#[test]
fn quantile_regression_matches_grid_search() {
    let n = 400;
    let x: Vec<f64> = standard_gumbel(n, 1).iter().map(|v| v.abs() + 1.0).collect();
    let e = normals(n, 2);
    let y: Vec<f64> = x.iter().zip(&e).map(|(x, e)| 0.5 + 0.7 * x + 0.3 * e).collect();
    for tau in [0.1, 0.5, 0.9] {
        let q = quantile_regression(&x, &y, tau).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..200 {
            for j in 0..200 {
                let a = -0.5 + i as f64 * 0.01;
                let b = 0.3 + j as f64 * 0.005;
                best = best.min(pinball_loss(&x, &y, tau, a, b));
            }
        }
        assert!(q.loss <= best + 1e-9, "tau {tau}: {} > {best}", q.loss);
    }
}

#[test]
fn multivariate_fit_matches_pairwise() {
    let (a, b) = gaussian_copula(0.6, 20_000, 30);
    let c = normals(20_000, 31);
    let cols = [rank_gumbel(&a), rank_gumbel(&b), rank_gumbel(&c)];
    let rows: Vec<Vec<f64>> = (0..20_000).map(|i| vec![cols[0][i], cols[1][i], cols[2][i]]).collect();
    let mf = fit_ht_multivariate(&rows, 0, u95()).unwrap();
    let pf = fit_ht(&GumbelPairSet::new(cols[0].clone(), cols[1].clone()).unwrap(), u95()).unwrap();
    assert_eq!(mf.alpha[0], pf.alpha);
    assert!(mf.alpha[0] > mf.alpha[1]);
}
