use thiserror::Error;

/// Errors raised by the geometric, analytic and field-summation layers.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("invalid integration bounds: require 0 < r_min < r_max, got [{r_min}, {r_max}]")]
    InvalidBounds { r_min: f64, r_max: f64 },
    #[error("zero-length path between coincident points")]
    ZeroLengthPath,
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl SimError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SimError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
