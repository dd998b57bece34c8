use thiserror::Error;

use crate::numerics::QuadratureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("unsupported model combination: {0}")]
    Unsupported(String),
    #[error("numerical cancellation: {what} = {value:e} outside [0, 1]")]
    Cancellation { what: &'static str, value: f64 },
}

impl ModelError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
