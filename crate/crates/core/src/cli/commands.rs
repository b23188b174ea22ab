use super::config::{check_input, check_quantile, check_return_periods, section, LimitStateConfig, RunConfig};
use super::manifest::OutputSink;
use crate::condex::{
    conditional_return_curve, fit_ht, fit_ht_directional, fit_ht_multivariate, gumbel_quantile, simulate_conditional,
    Bootstrap, GumbelPairSet, HtFit, Sector,
};
use crate::currents::{
    process_dataset, profile_conditional_extremes, read_current_csv, verify_processed, CurrentProfileDataset,
    ProfileCondexConfig,
};
use crate::error::{Error, Result};
use crate::form::{check_nesting, contour_csv, environmental_contour, form_search, LimitState};
use crate::io::{numeric_csv, read_columns_csv};
use crate::marginals::{decluster, read_series_csv, MarginalRecord, SemiParametricMarginal, UnivariateSample};
use crate::models::{
    apply_load_factor, hn_rosenblatt_chain, naive_combination, sdof_response, structural_reliability, ReliabilityInputs,
};
use crate::numeric::normal::norm_isf;
use crate::numeric::stats::{quantile, sorted};
use crate::rng::derive_seed;
use serde::Serialize;

pub(crate) type Log<'a> = &'a dyn Fn(&str);

fn to_gumbel_all(m: &SemiParametricMarginal, v: &[f64]) -> Result<Vec<f64>> {
    v.iter().map(|x| m.to_gumbel(*x)).collect()
}

pub(crate) fn fit_marginal(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.fit_marginal, "fit_marginal")?;
    check_input(&c.input)?;
    check_quantile(c.threshold_quantile, "threshold_quantile")?;
    if !c.return_periods.is_empty() {
        check_return_periods(&c.return_periods)?;
    }
    let raw = read_series_csv(&c.input, &c.label)?;
    log(&format!("read {} observations from {}", raw.len(), c.input.display()));
    let span = raw.span_years().filter(|s| *s > 0.0);
    let sample = match c.decluster_quantile {
        Some(q) => {
            check_quantile(q, "decluster_quantile")?;
            let thr = quantile(raw.values(), q);
            let peaks = decluster(&raw, thr, c.decluster_gap_hours)?;
            log(&format!("{} storm peaks above {thr}", peaks.len()));
            peaks
        }
        None => raw,
    };
    let epy = match (c.events_per_year, span) {
        (Some(e), _) => e,
        (None, Some(years)) => sample.len() as f64 / years,
        (None, None) => return Err(Error::invalid("events_per_year is required when the record has no time span")),
    };
    let m = SemiParametricMarginal::fit_quantile(sample, c.threshold_quantile, epy)?;
    let record = MarginalRecord::from(&m);
    log(&format!("threshold {} sigma {} xi {}", record.threshold, record.sigma, record.xi));
    out.write_json("marginal.json", &record)?;

    let values = sorted(m.sample().values());
    let n = values.len() as f64;
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let g = m.to_gumbel(v).unwrap_or(f64::INFINITY);
            Ok(vec![v, (i + 1) as f64 / (n + 1.0), m.cdf(v)?, g])
        })
        .collect::<Result<Vec<_>>>()?;
    out.write("diagnostics.csv", numeric_csv(&["value", "plotting_position", "model_cdf", "gumbel"], rows).as_bytes())?;
    if !c.return_periods.is_empty() {
        let rows = c.return_periods.iter().map(|&t| Ok(vec![t, m.return_value(t)?])).collect::<Result<Vec<_>>>()?;
        out.write("return_values.csv", numeric_csv(&["return_period_years", "return_value"], rows).as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum CondexFitRecord<'a> {
    Pooled(&'a HtFit),
    Directional(&'a crate::condex::DirectionalHtFit),
}

pub(crate) fn condex(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.condex, "condex")?;
    let seed = cfg.require_seed()?;
    check_input(&c.input)?;
    check_quantile(c.marginal_quantile, "marginal_quantile")?;
    check_quantile(c.dependence_quantile, "dependence_quantile")?;
    check_return_periods(&c.return_periods)?;
    let sectors = c.sector_list();
    let mut names = vec![c.x_column.as_str(), c.y_column.as_str()];
    match (&c.direction_column, sectors.is_empty()) {
        (Some(d), false) => names.push(d),
        (None, false) => return Err(Error::invalid("sectors need a direction_column")),
        _ => {}
    }
    let cols = read_columns_csv(&c.input, &names)?;
    let mx = SemiParametricMarginal::fit_quantile(UnivariateSample::new(cols[0].clone(), &c.x_column)?, c.marginal_quantile, c.events_per_year)?;
    let my = SemiParametricMarginal::fit_quantile(UnivariateSample::new(cols[1].clone(), &c.y_column)?, c.marginal_quantile, c.events_per_year)?;
    let xg = to_gumbel_all(&mx, &cols[0])?;
    let yg = to_gumbel_all(&my, &cols[1])?;
    let u = gumbel_quantile(c.dependence_quantile);

    // (sector, fit, pairs the fit was made on)
    let mut groups: Vec<(Option<Sector>, HtFit, GumbelPairSet)> = Vec::new();
    if sectors.is_empty() {
        let pairs = GumbelPairSet::new(xg, yg)?;
        let fit = fit_ht(&pairs, u)?;
        log(&format!("alpha {} beta {}", fit.alpha, fit.beta));
        out.write_json("fit.json", &CondexFitRecord::Pooled(&fit))?;
        groups.push((None, fit, pairs));
    } else {
        let theta = &cols[2];
        let dfit = fit_ht_directional(&xg, &yg, theta, &sectors, u)?;
        out.write_json("fit.json", &CondexFitRecord::Directional(&dfit))?;
        for s in &dfit.sectors {
            log(&format!("sector {}: {:?} ({} exceedances)", s.sector, s.status, s.n_exceedances));
            if let Some(fit) = &s.fit {
                let idx: Vec<usize> = (0..theta.len()).filter(|&i| s.sector.contains(theta[i])).collect();
                let pairs = GumbelPairSet::new(idx.iter().map(|&i| xg[i]).collect(), idx.iter().map(|&i| yg[i]).collect())?;
                groups.push((Some(s.sector), fit.clone(), pairs));
            }
        }
    }

    let sector_cols = |s: &Option<Sector>| s.map(|s| vec![s.lo, s.hi]).unwrap_or_default();
    let prefix: &[&'static str] = if sectors.is_empty() { &[] } else { &["sector_lo", "sector_hi"] };
    let x_sim = mx.return_value(c.return_periods[0])?;
    let mut sim_rows = Vec::new();
    let mut curve_rows = Vec::new();
    for (g, (sector, fit, pairs)) in groups.iter().enumerate() {
        let sim_seed = derive_seed(seed, "condex-simulate").wrapping_add(g as u64);
        for (x, y) in simulate_conditional(fit, &mx, &my, c.n_sim, x_sim, sim_seed)? {
            let mut r = sector_cols(sector);
            r.extend([x, y]);
            sim_rows.push(r);
        }
        for (j, &t) in c.return_periods.iter().enumerate() {
            let curve_seed = derive_seed(seed, "condex-curve").wrapping_add((g * c.return_periods.len() + j) as u64);
            let boot = (c.bootstrap_replicates > 0).then_some(Bootstrap { pairs, replicates: c.bootstrap_replicates });
            let cr = conditional_return_curve(fit, &mx, &my, 1.0 / t, c.n_sim, curve_seed, boot)?;
            let mut r = sector_cols(sector);
            r.extend([t, cr.exceed_prob_annual, cr.x_return, cr.median_y, cr.mode_y, cr.band_lo, cr.band_hi]);
            curve_rows.push(r);
        }
    }
    let head = |rest: &[&'static str]| -> Vec<&'static str> { prefix.iter().chain(rest).copied().collect() };
    out.write("simulated.csv", numeric_csv(&head(&["x", "y"]), sim_rows).as_bytes())?;
    out.write(
        "return_curve.csv",
        numeric_csv(
            &head(&["return_period_years", "exceed_prob_annual", "x_return", "median_y", "mode_y", "band_lo", "band_hi"]),
            curve_rows,
        )
        .as_bytes(),
    )?;
    Ok(())
}

fn period_tag(t: f64) -> String {
    format!("{t}").replace('.', "p")
}

pub(crate) fn contour(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.contour, "contour")?;
    check_return_periods(&c.return_periods)?;
    let chain = hn_rosenblatt_chain(&cfg.haver_nutzen()?)?;
    let contours = c
        .return_periods
        .iter()
        .map(|&t| environmental_contour(&chain, t, c.states_per_year, c.n_points))
        .collect::<Result<Vec<_>>>()?;
    let mut written = Vec::new();
    for ct in &contours {
        let name = format!("contour_T{}.csv", period_tag(ct.return_period_years));
        log(&format!("T = {} years: beta = {}", ct.return_period_years, ct.beta));
        written.push((out.write(&name, contour_csv(ct).as_bytes())?, ct.return_period_years));
    }
    // re-check the emitted files, not the in-memory contours
    let mut reread = Vec::new();
    for ((path, t), ct) in written.iter().zip(&contours) {
        let cols = read_columns_csv(path, &["x1", "x2"])?;
        if cols[0].len() != c.n_points {
            return Err(Error::Invariant(format!("{} has {} rows, expected {}", path.display(), cols[0].len(), c.n_points)));
        }
        let mut e = ct.clone();
        e.return_period_years = *t;
        e.points = cols[0].iter().zip(&cols[1]).map(|(a, b)| [*a, *b]).collect();
        reread.push(e);
    }
    check_nesting(&reread)
        .map_err(|(a, b)| Error::Invariant(format!("the {a}-year contour is not inside the {b}-year contour")))
}

pub(crate) fn form(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.form, "form")?;
    let gamma = cfg.design_factors()?;
    let (ls, chain) = match &c.limit_state {
        LimitStateConfig::LinearU { intercept, coefficients } => {
            if coefficients.is_empty() {
                return Err(Error::invalid("linear limit state needs coefficients"));
            }
            let (a0, a) = (*intercept, coefficients.clone());
            let ls = LimitState::standard(a.len(), move |u| a0 - a.iter().zip(u).map(|(c, v)| c * v).sum::<f64>());
            (ls, None)
        }
        LimitStateConfig::Sdof { capacity, natural_period, damping_ratio } => {
            let chain = hn_rosenblatt_chain(&cfg.haver_nutzen()?)?;
            sdof_response(1.0, 1.0, *natural_period, *damping_ratio)?;
            let (cap, tn, z) = (*capacity, *natural_period, *damping_ratio);
            let ls = LimitState::physical(2, move |x| match sdof_response(x[0], x[1], tn, z) {
                Ok(r) => cap - apply_load_factor(r, gamma),
                Err(_) => f64::NAN,
            });
            (ls, Some(chain))
        }
        LimitStateConfig::ResponseSurface { capacity, wind, current } => {
            let chain = hn_rosenblatt_chain(&cfg.haver_nutzen()?)?;
            let rs = section(&cfg.response, "response")?.clone();
            rs.validate()?;
            rs.evaluate(0.0, *wind, *current)?;
            let (cap, w, cu) = (*capacity, *wind, *current);
            let ls = LimitState::physical(2, move |x| match rs.evaluate(x[0], w, cu) {
                Ok(r) => cap - apply_load_factor(r, gamma),
                Err(_) => f64::NAN,
            });
            (ls, Some(chain))
        }
    };
    let start = c.start.clone().unwrap_or_else(|| vec![0.0; ls.dimension()]);
    let res = form_search(&ls, chain.as_ref(), &start)?;
    log(&format!("beta {} p_f {} after {} iterations", res.beta, res.p_f, res.iterations));
    if !res.converged {
        return Err(Error::NonConvergence(format!("FORM search stopped after {} iterations", res.iterations)));
    }
    out.write_json("form.json", &res)?;
    Ok(())
}

#[derive(Serialize)]
struct ReliabilityReport {
    p_f: f64,
    beta_equivalent: f64,
}

pub(crate) fn reliability(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.reliability, "reliability")?;
    let p_f = structural_reliability(&ReliabilityInputs::from_models(c.load, c.resistance)?)?;
    log(&format!("p_f = {p_f}"));
    out.write_json("reliability.json", &ReliabilityReport { p_f, beta_equivalent: norm_isf(p_f) })?;
    Ok(())
}

fn safe_name(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Re-read an emitted per-depth CSV and check reconstruction and energy
/// against the raw velocities.
fn reverify_depth_file(path: &std::path::Path, raw: &crate::currents::DepthSeries) -> Result<()> {
    let cols = read_columns_csv(path, &["major", "minor", "tidal_major", "tidal_minor", "residual_major", "residual_minor"])?;
    let label = &raw.label;
    if cols[0].len() != raw.east.len() {
        return Err(Error::Invariant(format!("{}: row count differs from input", path.display())));
    }
    for (total, tidal, resid) in [(0, 2, 4), (1, 3, 5)] {
        if let Some(i) = (0..cols[0].len()).find(|&i| (cols[tidal][i] + cols[resid][i] - cols[total][i]).abs() > 1e-9) {
            return Err(Error::Invariant(format!("depth {label}: tidal + residual differs from total at row {i}")));
        }
    }
    let e_raw: f64 = raw.east.iter().zip(&raw.north).map(|(e, n)| e * e + n * n).sum();
    let e_rot: f64 = cols[0].iter().zip(&cols[1]).map(|(a, b)| a * a + b * b).sum();
    if (e_raw - e_rot).abs() > 1e-9 * e_raw {
        return Err(Error::Invariant(format!("depth {label}: emitted axes do not preserve kinetic energy")));
    }
    Ok(())
}

pub(crate) fn currents(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.currents, "currents")?;
    let seed = cfg.require_seed()?;
    check_input(&c.input)?;
    check_quantile(c.marginal_quantile, "marginal_quantile")?;
    check_quantile(c.dependence_quantile, "dependence_quantile")?;
    check_return_periods(&[c.return_period_years])?;
    let ds: CurrentProfileDataset = read_current_csv(&c.input)?;
    let k = ds
        .depths()
        .iter()
        .position(|d| d.label == c.conditioning_depth)
        .ok_or_else(|| Error::invalid(format!("conditioning depth {} not in the dataset", c.conditioning_depth)))?;
    let processed = process_dataset(&ds, &c.harmonic())?;
    verify_processed(&ds, &processed)?;
    for (i, d) in processed.depths.iter().enumerate() {
        log(&format!("depth {}: major axis {:.2} deg", d.label, d.major_angle_deg));
        let path = out.write(&format!("depth_{}.csv", safe_name(&d.label)), processed.depth_csv(i).as_bytes())?;
        reverify_depth_file(&path, &ds.depths()[i])?;
    }
    out.write("hourly_extrema.csv", processed.hourly_csv().as_bytes())?;
    let report = profile_conditional_extremes(
        &processed,
        &ProfileCondexConfig {
            conditioning_depth: k,
            axis: c.axis,
            mode: c.mode,
            marginal_quantile: c.marginal_quantile,
            dependence_quantile: c.dependence_quantile,
            return_period_years: c.return_period_years,
            n_sim: c.n_sim,
            seed: derive_seed(seed, "currents"),
        },
    )?;
    for d in &report.conditional {
        log(&format!("depth {}: conditional rotation {:.2} deg", d.label, d.rotation_deg));
    }
    out.write_json("profile_report.json", &report)?;
    Ok(())
}

pub(crate) fn naive_combo(cfg: &RunConfig, out: &mut OutputSink, log: Log) -> Result<()> {
    let c = section(&cfg.naive_combo, "naive_combo")?;
    check_input(&c.input)?;
    check_quantile(c.marginal_quantile, "marginal_quantile")?;
    check_return_periods(&c.return_periods)?;
    if c.columns.len() != c.return_periods.len() {
        return Err(Error::invalid(format!(
            "{} columns but {} return periods",
            c.columns.len(),
            c.return_periods.len()
        )));
    }
    let names: Vec<&str> = c.columns.iter().map(String::as_str).collect();
    let cols = read_columns_csv(&c.input, &names)?;
    let marginals = cols
        .iter()
        .zip(&c.columns)
        .map(|(v, name)| {
            SemiParametricMarginal::fit_quantile(UnivariateSample::new(v.clone(), name)?, c.marginal_quantile, c.events_per_year)
        })
        .collect::<Result<Vec<_>>>()?;
    let report = match &c.dependence {
        None => naive_combination(&marginals, &c.return_periods, None, 0, 0)?,
        Some(d) => {
            let seed = cfg.require_seed()?;
            check_quantile(d.dependence_quantile, "dependence_quantile")?;
            let k = c
                .columns
                .iter()
                .position(|n| *n == d.conditioning_column)
                .ok_or_else(|| Error::invalid(format!("conditioning column {} not listed", d.conditioning_column)))?;
            let gumbel = (0..cols[0].len())
                .map(|i| marginals.iter().zip(&cols).map(|(m, col)| m.to_gumbel(col[i])).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_ht_multivariate(&gumbel, k, gumbel_quantile(d.dependence_quantile))?;
            naive_combination(&marginals, &c.return_periods, Some(&fit), d.n_sim, derive_seed(seed, "naive-combo"))?
        }
    };
    if let Some(j) = &report.joint {
        log(&format!("joint annual rate {} (se {})", j.annual_rate, j.std_error));
    }
    out.write_json("naive_combination.json", &report)?;
    Ok(())
}
