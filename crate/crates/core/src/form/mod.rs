//! First-order reliability machinery.
//!
//! A [`RosenblattChain`] maps physical variables to independent standard
//! normals one conditional stage at a time. [`form_search`] finds the most
//! probable failure point in that space; [`environmental_contour`] runs the
//! map backwards from a circle of fixed reliability index.

mod contour;
mod rosenblatt;
mod search;

pub use contour::{check_nesting, contour_csv, environmental_contour, point_in_polygon, EnvironmentalContour, DEFAULT_STATES_PER_YEAR};
pub use rosenblatt::{
    ConditionalStage, Exponential, LogNormal, Normal, RosenblattChain, StandardNormal, Uniform, Weibull,
};
pub use search::{
    failure_probability, form_search, inverse_form_design_point, DesignPoint, FormResult, LimitState,
};
