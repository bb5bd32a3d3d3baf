use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("bilinear form is degenerate on the ambient space")]
    DegenerateForm,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("stencil leaves the domain at {point:?}: clearance {clearance} < reach {reach}")]
    OutsideDomain {
        point: Vec<f64>,
        clearance: f64,
        reach: f64,
    },
    #[error("singular or indefinite metric: {0}")]
    SingularMetric(String),
    #[error("field value out of range: {0}")]
    BadValue(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
