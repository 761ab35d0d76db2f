use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero distance to emitter at ({x}, {y})")]
    ZeroDistance { x: f64, y: f64 },

    #[error(
        "degenerate least-squares geometry: emitter is (nearly) equidistant from all sensors \
         (denominator {denominator:e})"
    )]
    DegenerateLse { denominator: f64 },

    #[error("query point ({x}, {y}) is not strictly inside the sensors' convex hull")]
    OutOfHull { x: f64, y: f64 },

    #[error("conditional variance {value:e} is negative beyond round-off")]
    NegativeVariance { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
