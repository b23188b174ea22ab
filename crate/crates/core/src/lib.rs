//! Joint extremes of metocean variables.
//!
//! The crate is organised around five analysis areas:
//!
//! - [`marginals`]: semi-parametric univariate models (empirical body, generalized
//!   Pareto tail) with transforms to and from the standard Gumbel scale.
//! - [`condex`]: the Heffernan–Tawn conditional extremes model in bivariate,
//!   multivariate and directional-sector forms, plus linear quantile regression.
//! - [`form`]: Rosenblatt chains, FORM most-probable-point search and inverse-FORM
//!   environmental contours.
//! - [`models`]: concrete joint models and response utilities (Haver–Nutzen Hs/Tp,
//!   reliability convolution, response surfaces, SDOF transfer function, naive
//!   combination baseline).
//! - [`currents`]: multi-depth current profile preprocessing and recombination.
//!
//! [`cli`] wires these into the `metjoint` batch front end.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod condex;
pub mod currents;
pub mod error;
pub mod form;
pub mod io;
pub mod marginals;
pub mod models;
pub mod numeric;
pub mod rng;

pub use error::{Error, Result};
