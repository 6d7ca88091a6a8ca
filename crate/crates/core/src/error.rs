use thiserror::Error;

/// Errors produced by the numerics in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Input for which a formula has no finite value (e.g. `q1 = 0`).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("collision: r1 = {r1:e}, r2 = {r2:e} below floor {floor:e}")]
    Collision { r1: f64, r2: f64, floor: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian at ({x}, {y})")]
    SingularJacobian { x: f64, y: f64 },

    /// Refinement settled on a point outside the region its label requires.
    #[error("refinement left the basin of {0}")]
    WrongBasin(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The drag coefficient is too large for the first-order series in `a`.
    #[error("series invalid: |alpha1 a^2| = {correction:e} exceeds 0.1 b = {limit:e}")]
    SeriesInvalid { correction: f64, limit: f64 },

    #[error("negative radicand {0:e}")]
    NegativeRadicand(f64),

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("ill-conditioned differencing: step disagreement {disagreement:e}")]
    IllConditioned { disagreement: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::Degenerate(_) => "degenerate-input",
            Error::Collision { .. } => "collision",
            Error::NoConvergence { .. } => "no-convergence",
            Error::SingularJacobian { .. } => "singular-jacobian",
            Error::WrongBasin(_) => "wrong-basin",
            Error::Precondition(_) => "precondition",
            Error::SeriesInvalid { .. } => "series-invalid",
            Error::NegativeRadicand(_) => "negative-radicand",
            Error::NoSignChange { .. } => "no-sign-change",
            Error::IllConditioned { .. } => "ill-conditioned",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
