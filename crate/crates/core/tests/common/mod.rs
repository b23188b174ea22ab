#![allow(dead_code)]

use metocean_joint::marginals::{GpdParams, SemiParametricMarginal, UnivariateSample};
use metocean_joint::models::{HaverNutzenModel, MuCoeffs, VarCoeffs, WeibullParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// GPD excesses by inversion of the survival function.
pub fn gpd_sample(sigma: f64, xi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let s: f64 = 1.0 - r.random::<f64>();
            if xi == 0.0 { -sigma * s.ln() } else { sigma / xi * (s.powf(-xi) - 1.0) }
        })
        .collect()
}

pub fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| StandardNormal.sample(&mut r)).collect()
}

/// Standard normal pairs with correlation `rho`.
pub fn gaussian_copula(rho: f64, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let s = (1.0 - rho * rho).sqrt();
    (0..n)
        .map(|_| {
            let a: f64 = StandardNormal.sample(&mut r);
            let b: f64 = StandardNormal.sample(&mut r);
            (a, rho * a + s * b)
        })
        .unzip()
}

/// Standard Gumbel scores from ranks, `−ln(−ln(r/(n+1)))`.
pub fn rank_gumbel(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; n];
    for (rank, &i) in idx.iter().enumerate() {
        let p = (rank + 1) as f64 / (n + 1) as f64;
        out[i] = -(-p.ln()).ln();
    }
    out
}

/// Standard normal CDF from the complementary error function.
pub fn phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Semi-parametric marginal on `values` with a GPD tail above the 0.9 quantile.
pub fn marginal(values: Vec<f64>, events_per_year: f64) -> SemiParametricMarginal {
    SemiParametricMarginal::fit_quantile(UnivariateSample::new(values, "x").unwrap(), 0.9, events_per_year).unwrap()
}

/// Marginal whose tail is set exactly rather than fitted.
pub fn marginal_with_tail(values: Vec<f64>, threshold: f64, sigma: f64, xi: f64, epy: f64) -> SemiParametricMarginal {
    SemiParametricMarginal::from_parts(
        UnivariateSample::new(values, "x").unwrap(),
        GpdParams::new(sigma, xi, threshold).unwrap(),
        epy,
    )
    .unwrap()
}

pub fn demo_hn() -> HaverNutzenModel {
    HaverNutzenModel {
        weibull: WeibullParams { alpha: 2.5, beta: 1.5 },
        mu: MuCoeffs { a1: 1.2, a2: 0.55, a3: 0.45 },
        var: VarCoeffs { b1: 0.01, b2: 0.08, b3: 0.3 },
    }
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 { s[n / 2] } else { 0.5 * (s[n / 2 - 1] + s[n / 2]) }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Storm intensity: Gaussian bumps (6 h width) at Poisson onsets, one per ~3 days.
pub fn storm_process(hours: &[f64], seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let span = hours[hours.len() - 1];
    let mut storms = Vec::new();
    let mut t = 0.0;
    loop {
        t += -72.0 * (1.0 - r.random::<f64>()).ln();
        if t > span {
            break;
        }
        let peak = 0.2 - 0.4 * (1.0 - r.random::<f64>()).ln();
        storms.push((t, peak));
    }
    hours
        .iter()
        .map(|&h| storms.iter().map(|&(t0, p)| p * (-(h - t0).powi(2) / 72.0).exp()).sum())
        .collect()
}

/// Three-depth profile on a 10-minute grid: an M2 tide along 30° at every depth
/// plus storm flow. `offsets_deg[k]` turns the storm at depth `k` relative to
/// the tide; `mix[k]` is the share of the storm driven by the common process,
/// the rest by an independent one.
pub fn current_fixture(days: usize, offsets_deg: [f64; 3], mix: [f64; 3], seed: u64) -> metocean_joint::currents::CurrentProfileDataset {
    use metocean_joint::currents::{CurrentProfileDataset, DepthSeries};
    let n = days * 144;
    let secs: Vec<f64> = (0..n).map(|i| i as f64 * 600.0).collect();
    let hours: Vec<f64> = secs.iter().map(|s| s / 3600.0).collect();
    let common = storm_process(&hours, seed);
    let tide_dir = 30f64.to_radians();
    let w = std::f64::consts::TAU / 12.4206012;
    let depths = (0..3)
        .map(|k| {
            let own = storm_process(&hours, seed + 10 + k as u64);
            let noise_e = normals(n, seed + 20 + k as u64);
            let noise_n = normals(n, seed + 30 + k as u64);
            let dir = tide_dir + offsets_deg[k].to_radians();
            let (mut east, mut north) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for i in 0..n {
                let tide = (w * hours[i]).cos();
                let s = mix[k] * common[i] + (1.0 - mix[k]) * own[i];
                east.push(tide * tide_dir.cos() + s * dir.cos() + 0.02 * noise_e[i]);
                north.push(tide * tide_dir.sin() + s * dir.sin() + 0.02 * noise_n[i]);
            }
            DepthSeries { label: format!("d{}", k + 1), east, north }
        })
        .collect();
    CurrentProfileDataset::new(secs, depths).unwrap()
}

/// Gumbel-scale pairs from a Gaussian copula.
pub fn copula_pairs(rho: f64, n: usize, seed: u64) -> metocean_joint::condex::GumbelPairSet {
    let (a, b) = gaussian_copula(rho, n, seed);
    metocean_joint::condex::GumbelPairSet::new(rank_gumbel(&a), rank_gumbel(&b)).unwrap()
}

pub fn standard_gumbel(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| -(-(1.0 - r.random::<f64>()).ln()).ln()).collect()
}

/// Pairs following `y = αx + x^β Z` (Z ~ N(0, 1)) wherever `x > 0`; below
/// that `y` is an independent Gumbel draw.
pub fn planted_pairs(alpha: f64, beta: f64, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let x = standard_gumbel(n, seed);
    let z = normals(n, seed + 1);
    let w = standard_gumbel(n, seed + 2);
    let y = (0..n).map(|i| if x[i] > 0.0 { alpha * x[i] + x[i].powf(beta) * z[i] } else { w[i] }).collect();
    (x, y)
}

/// Two-component dependence model with `y = x` exactly.
pub fn comonotone_model(threshold_u: f64) -> metocean_joint::condex::MultiHtFit {
    metocean_joint::condex::MultiHtFit {
        conditioning_index: 0,
        dimension: 2,
        threshold_u,
        alpha: vec![1.0],
        beta: vec![0.0],
        mu: vec![0.0],
        sigma: vec![1.0],
        residual_vectors: vec![vec![0.0]],
    }
}

/// Two-component model with negligible α and a stratified standard Gumbel
/// residual pool, so the second component is independent of the first.
pub fn independent_model(threshold_u: f64) -> metocean_joint::condex::MultiHtFit {
    let m = 200_000;
    metocean_joint::condex::MultiHtFit {
        conditioning_index: 0,
        dimension: 2,
        threshold_u,
        alpha: vec![1e-12],
        beta: vec![0.0],
        mu: vec![0.5772],
        sigma: vec![1.28],
        residual_vectors: (0..m).map(|i| vec![metocean_joint::condex::gumbel_quantile((i as f64 + 0.5) / m as f64)]).collect(),
    }
}

/// Ray-casting point-in-polygon, independent of the library's version.
pub fn inside(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut c = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + n - 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0] {
            c = !c;
        }
    }
    c
}

/// Monte Carlo estimate of `P(E > R)` for `E ~ Exp(rate)`, `R ~ U(lo, hi)`,
/// with its standard error.
pub fn exp_uniform_mc(rate: f64, lo: f64, hi: f64, n: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let hits = (0..n)
        .filter(|_| {
            let e = -(1.0 - r.random::<f64>()).ln() / rate;
            let res = lo + (hi - lo) * r.random::<f64>();
            e > res
        })
        .count();
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

pub fn write_cli_inputs(dir: &std::path::Path) {
    let n = 20_000;
    let hs: Vec<f64> = gpd_sample(0.8, 0.05, n, 1).iter().map(|e| 1.0 + e).collect();
    let mut s = String::from("timestamp,value\n");
    for (i, v) in hs.iter().enumerate() {
        s.push_str(&format!("{},{v}\n", metocean_joint::io::format_timestamp(1.6e9 + i as f64 * 3600.0)));
    }
    std::fs::write(dir.join("hs.csv"), s).unwrap();

    let (a, b) = gaussian_copula(0.6, 5000, 2);
    let mut s = String::from("hs,tp,dir,current\n");
    for i in 0..5000 {
        s.push_str(&format!("{},{},{},{}\n", 2.0 + a[i].exp(), 8.0 + b[i], (i * 37 % 360) as f64, 0.5 + 0.1 * b[i].exp()));
    }
    std::fs::write(dir.join("joint.csv"), s).unwrap();

    std::fs::write(dir.join("profile.csv"), current_fixture(60, [0.0, 10.0, -10.0], [1.0, 0.9, 0.9], 3).to_csv()).unwrap();
}

const DATA_SECTIONS: &str = r#"
[fit_marginal]
input = "hs.csv"
label = "hs"
threshold_quantile = 0.9
decluster_quantile = 0.9
return_periods = [10.0, 100.0]

[condex]
input = "joint.csv"
x_column = "hs"
y_column = "tp"
direction_column = "dir"
sectors = [[0.0, 180.0], [180.0, 360.0]]
events_per_year = 12.0
return_periods = [10.0, 100.0]
n_sim = 2000
bootstrap_replicates = 8

[currents]
input = "profile.csv"
conditioning_depth = "d1"
mode = "residual"
return_period_years = 1.0
n_sim = 2000

[naive_combo]
input = "joint.csv"
columns = ["hs", "current"]
return_periods = [100.0, 10.0]
events_per_year = 12.0
[naive_combo.dependence]
conditioning_column = "hs"
n_sim = 5000
"#;

/// Temporary directory with inputs and a config covering every command.
pub fn cli_workspace() -> (tempfile::TempDir, std::path::PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    write_cli_inputs(dir.path());
    let base = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/config/example.toml")).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, format!("{base}\n{DATA_SECTIONS}")).unwrap();
    (dir, cfg)
}
