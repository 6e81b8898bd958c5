use alloc::string::String;

/// Errors raised by the physics core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("photon-number truncation n_max = {n_max} is below the minimum of 3")]
    TruncationTooSmall { n_max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("integration step dt = {dt} exceeds the stability limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("near-singular denominator in {what} (|d| = {magnitude:e})")]
    SingularDenominator { what: &'static str, magnitude: f64 },

    #[error("correlation undefined: photon population {population:e} underflows")]
    UndefinedCorrelation { population: f64 },

    #[error("steady state is not unique (smallest singular value ~ {sigma:e})")]
    DegenerateSteadyState { sigma: f64 },

    #[error("steady-state residual {residual:e} exceeds {tolerance:e}")]
    NotConverged { residual: f64, tolerance: f64 },

    #[error("density-matrix invariant violated: {0}")]
    InvariantViolation(String),

    #[error("domain error: {0}")]
    Domain(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
