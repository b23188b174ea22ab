//! Small numerical toolkit shared by the analysis modules.

pub mod normal;
pub mod optimize;
pub mod quadrature;
pub mod stats;

pub use normal::{norm_cdf, norm_pdf, norm_ppf, norm_sf};
