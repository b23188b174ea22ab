use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across the library.
///
/// Variants split into input problems (bad data or configuration) and numerical
/// failures; the CLI maps the two groups onto different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("too few observations: need at least {needed}, got {got} ({context})")]
    TooFew {
        needed: usize,
        got: usize,
        context: String,
    },

    #[error("probability saturated at {0}; transform undefined")]
    Saturated(f64),

    #[error("optimizer failed to converge: {0}")]
    NonConvergence(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the data or configuration rather than the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::TooFew { .. } | Error::Io(_) | Error::Csv(_) | Error::Json(_)
        )
    }
}

pub(crate) fn ensure_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(format!("{what}: non-finite value at index {i}"))),
        None => Ok(()),
    }
}
