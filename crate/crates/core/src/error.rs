use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported algebra dimension {0} (expected 4 or 8)")]
    UnsupportedDimension(usize),

    #[error("zero divisor: the zero element has no inverse")]
    ZeroDivisor,

    #[error("point is within {eps_axis:e} of the real axis (|imag| = {imag_norm:e}); the local plane is undefined")]
    RealAxisSingularity { imag_norm: f64, eps_axis: f64 },

    #[error("point is off the function's plane by {distance:e}")]
    PlaneMembership { distance: f64 },

    #[error("{function} is singular at {point:?}")]
    Singularity {
        function: &'static str,
        point: Vec<f64>,
    },

    #[error("operator `{operator}` is not defined for the {algebra} algebra")]
    UnsupportedOperator {
        operator: &'static str,
        algebra: &'static str,
    },

    #[error("invalid `{field}`: {reason}")]
    InvalidSpec { field: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("grid is empty after excluding points within {radius} of the real axis")]
    EmptyGrid { radius: f64 },

    #[error("at grid point #{index} {point:?}: {source}")]
    AtPoint {
        index: usize,
        point: Vec<f64>,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn spec(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by malformed input rather than by the
    /// numerical domain of the problem.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::DimensionMismatch { .. }
            | Error::UnsupportedDimension(_)
            | Error::UnsupportedOperator { .. }
            | Error::InvalidSpec { .. }
            | Error::Config(_) => true,
            Error::AtPoint { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
