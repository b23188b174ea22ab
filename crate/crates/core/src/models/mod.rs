//! Concrete joint environmental models and response utilities.

mod haver_nutzen;
mod naive;
mod reliability;
mod response;
mod sdof;

pub use haver_nutzen::{hn_rosenblatt_chain, HaverNutzenModel, HnTpStage, MuCoeffs, VarCoeffs, WeibullParams};
pub use naive::{naive_combination, JointExceedance, NaiveCombinationReport};
pub use reliability::{structural_reliability, LoadModel, ReliabilityInputs, Resistance, ResistanceModel};
pub use response::{
    apply_load_factor, back_calculate, AssociateModel, ConditionalMedian, DesignFactors, EnvVariable, Environment,
    ResponseSurface, ResponseTerm, DEFAULT_GAMMA_E,
};
pub use sdof::sdof_response;
