//! Multi-depth current processing: principal axes, local harmonic analysis,
//! hourly extrema, tidal recombination and profile conditional extremes.

mod axes;
mod dataset;
mod harmonic;
mod hourly;
mod profile;
mod recombine;

pub use axes::{principal_axes, PrincipalAxes};
pub use dataset::{
    process_dataset, read_current_csv, verify_processed, CurrentProfileDataset, DepthSeries, ProcessedDepth,
    ProcessedProfile,
};
pub use harmonic::{
    fit_constituents, harmonic_split, Constituent, ConstituentFit, HarmonicFitConfig, HarmonicSplit, WindowFit,
    DEFAULT_STEP_HOURS, DEFAULT_WINDOW_HOURS,
};
pub use hourly::{hourly_extrema, HourlyExtrema};
pub use profile::{
    profile_conditional_extremes, ConditioningAxis, ConditioningMode, DepthMedians, ProfileCondexConfig, ProfileReport,
    EXTREMA_COLUMNS,
};
pub use recombine::recombine;

pub(crate) const SECONDS_PER_HOUR: f64 = 3600.0;
