use crate::condex::Sector;
use crate::currents::{ConditioningAxis, ConditioningMode, Constituent, HarmonicFitConfig, DEFAULT_STEP_HOURS, DEFAULT_WINDOW_HOURS};
use crate::error::{Error, Result};
use crate::form::DEFAULT_STATES_PER_YEAR;
use crate::marginals::{DEFAULT_GAP_HOURS, DEFAULT_THRESHOLD_QUANTILE};
use crate::models::{
    DesignFactors, HaverNutzenModel, LoadModel, MuCoeffs, ResistanceModel, ResponseSurface, VarCoeffs, WeibullParams,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_marginal_quantile() -> f64 {
    DEFAULT_THRESHOLD_QUANTILE
}
fn default_dependence_quantile() -> f64 {
    0.95
}
fn default_states_per_year() -> f64 {
    DEFAULT_STATES_PER_YEAR
}
fn default_contour_points() -> usize {
    360
}
fn default_n_sim() -> usize {
    10_000
}
fn default_gap_hours() -> f64 {
    DEFAULT_GAP_HOURS
}
fn default_label() -> String {
    "value".into()
}
fn default_window() -> f64 {
    DEFAULT_WINDOW_HOURS
}
fn default_step() -> f64 {
    DEFAULT_STEP_HOURS
}
fn default_current_return_period() -> f64 {
    10.0
}

/// One run configuration document. Each command reads its own table plus the
/// shared model coefficients.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weibull: Option<WeibullParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuCoeffs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<VarCoeffs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<ResponseSurface>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<DesignFactors>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_marginal: Option<FitMarginalConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condex: Option<CondexConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reliability: Option<ReliabilityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub currents: Option<CurrentsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub naive_combo: Option<NaiveComboConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitMarginalConfig {
    pub input: PathBuf,
    #[serde(default = "default_label")]
    pub label: String,
    #[serde(default = "default_marginal_quantile")]
    pub threshold_quantile: f64,
    /// Observations per year; defaults to the record's count over its span.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events_per_year: Option<f64>,
    /// When set, storm peaks above this quantile are extracted first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decluster_quantile: Option<f64>,
    #[serde(default = "default_gap_hours")]
    pub decluster_gap_hours: f64,
    #[serde(default)]
    pub return_periods: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondexConfig {
    pub input: PathBuf,
    pub x_column: String,
    pub y_column: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction_column: Option<String>,
    /// Direction sectors as `[lo, hi)` pairs in degrees; requires `direction_column`.
    #[serde(default)]
    pub sectors: Vec<[f64; 2]>,
    pub events_per_year: f64,
    #[serde(default = "default_marginal_quantile")]
    pub marginal_quantile: f64,
    #[serde(default = "default_dependence_quantile")]
    pub dependence_quantile: f64,
    pub return_periods: Vec<f64>,
    #[serde(default = "default_n_sim")]
    pub n_sim: usize,
    #[serde(default)]
    pub bootstrap_replicates: usize,
}

impl CondexConfig {
    pub fn sector_list(&self) -> Vec<Sector> {
        self.sectors.iter().map(|s| Sector::new(s[0], s[1])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourConfig {
    pub return_periods: Vec<f64>,
    #[serde(default = "default_states_per_year")]
    pub states_per_year: f64,
    #[serde(default = "default_contour_points")]
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LimitStateConfig {
    /// `g(u) = intercept − Σ coefficients[i]·u[i]` in standard normal space.
    LinearU { intercept: f64, coefficients: Vec<f64> },
    /// `g = capacity − γ_E·hs·|H(tp)|` on the configured Hs/Tp model.
    Sdof { capacity: f64, natural_period: f64, damping_ratio: f64 },
    /// `g = capacity − γ_E·R(hs, wind, current)` with wind and current fixed.
    ResponseSurface {
        capacity: f64,
        #[serde(default)]
        wind: f64,
        #[serde(default)]
        current: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormConfig {
    pub limit_state: LimitStateConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReliabilityConfig {
    pub load: LoadModel,
    pub resistance: ResistanceModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentsConfig {
    pub input: PathBuf,
    pub conditioning_depth: String,
    #[serde(default = "default_axis")]
    pub axis: ConditioningAxis,
    /// No default: residual-only and residual-plus-tide conditioning answer
    /// different questions.
    pub mode: ConditioningMode,
    #[serde(default = "default_current_return_period")]
    pub return_period_years: f64,
    #[serde(default = "default_marginal_quantile")]
    pub marginal_quantile: f64,
    #[serde(default = "default_dependence_quantile")]
    pub dependence_quantile: f64,
    #[serde(default = "default_n_sim")]
    pub n_sim: usize,
    #[serde(default = "default_window")]
    pub window_hours: f64,
    #[serde(default = "default_step")]
    pub step_hours: f64,
    /// Constituent periods in hours by name; defaults to M2, S2, K1, O1.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constituents: Vec<ConstituentConfig>,
}

fn default_axis() -> ConditioningAxis {
    ConditioningAxis::Major
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstituentConfig {
    pub name: String,
    pub period_hours: f64,
}

impl CurrentsConfig {
    pub fn harmonic(&self) -> HarmonicFitConfig {
        let mut cfg = HarmonicFitConfig { window_hours: self.window_hours, step_hours: self.step_hours, ..Default::default() };
        if !self.constituents.is_empty() {
            cfg.constituents = self.constituents.iter().map(|c| Constituent::new(c.name.clone(), c.period_hours)).collect();
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceConfig {
    pub conditioning_column: String,
    #[serde(default = "default_dependence_quantile")]
    pub dependence_quantile: f64,
    #[serde(default = "default_n_sim")]
    pub n_sim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaiveComboConfig {
    pub input: PathBuf,
    pub columns: Vec<String>,
    pub return_periods: Vec<f64>,
    pub events_per_year: f64,
    #[serde(default = "default_marginal_quantile")]
    pub marginal_quantile: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependence: Option<DependenceConfig>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("configuration: {e}")))
    }

    /// Read a configuration file; relative input paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read configuration {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(c) = &mut self.fit_marginal {
            fix(&mut c.input);
        }
        if let Some(c) = &mut self.condex {
            fix(&mut c.input);
        }
        if let Some(c) = &mut self.currents {
            fix(&mut c.input);
        }
        if let Some(c) = &mut self.naive_combo {
            fix(&mut c.input);
        }
    }

    pub fn haver_nutzen(&self) -> Result<HaverNutzenModel> {
        match (self.weibull, self.mu, self.var) {
            (Some(weibull), Some(mu), Some(var)) => {
                let m = HaverNutzenModel { weibull, mu, var };
                m.validate()?;
                Ok(m)
            }
            _ => Err(Error::invalid("tables [weibull], [mu] and [var] are required")),
        }
    }

    pub fn design_factors(&self) -> Result<DesignFactors> {
        let f = self.factors.unwrap_or_default();
        f.validate()?;
        Ok(f)
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::invalid("this command is stochastic and needs a seed (config `seed` or --seed)"))
    }
}

pub(crate) fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T> {
    s.as_ref().ok_or_else(|| Error::invalid(format!("configuration lacks a [{name}] table")))
}

pub(crate) fn check_input(p: &Path) -> Result<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(Error::invalid(format!("input file {} does not exist", p.display())))
    }
}

pub(crate) fn check_quantile(q: f64, what: &str) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} {q} outside (0, 1)")))
    }
}

pub(crate) fn check_return_periods(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::invalid("at least one return period is required"));
    }
    match t.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        Some(v) => Err(Error::invalid(format!("return period {v} must be positive"))),
        None => Ok(()),
    }
}
