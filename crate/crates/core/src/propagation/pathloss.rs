use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Deterministic large-scale path gain `L(z)` as a function of distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PathLossModel {
    /// `L(r) = K r^-gamma`.
    Exponent { k: f64, gamma: f64 },
    /// `L(r) = K max(R0, r)^-gamma`.
    ModifiedExponent { k: f64, gamma: f64, r0: f64 },
}

impl PathLossModel {
    pub fn k(&self) -> f64 {
        match *self {
            Self::Exponent { k, .. } | Self::ModifiedExponent { k, .. } => k,
        }
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            Self::Exponent { gamma, .. } | Self::ModifiedExponent { gamma, .. } => gamma,
        }
    }

    /// Reference distance below which the gain saturates (0 for the plain model).
    pub fn r0(&self) -> f64 {
        match *self {
            Self::Exponent { .. } => 0.0,
            Self::ModifiedExponent { r0, .. } => r0,
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        match self {
            Self::Exponent { k, .. } => Self::Exponent { k, gamma },
            Self::ModifiedExponent { k, r0, .. } => Self::ModifiedExponent { k, gamma, r0 },
        }
    }

    #[inline]
    pub fn gain(&self, distance: f64) -> f64 {
        match *self {
            Self::Exponent { k, gamma } => k * distance.powf(-gamma),
            Self::ModifiedExponent { k, gamma, r0 } => k * distance.max(r0).powf(-gamma),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if !(k > 0.0 && k.is_finite()) {
            return Err(ModelError::invalid("pathloss.k", format!("K must be positive, got {k}")));
        }
        let gamma = self.gamma();
        if !(gamma > 2.0 && gamma.is_finite()) {
            return Err(ModelError::invalid(
                "pathloss.gamma",
                format!("path loss exponent must satisfy gamma > 2, got {gamma}"),
            ));
        }
        if let Self::ModifiedExponent { r0, .. } = *self {
            if !(r0 > 0.0 && r0.is_finite()) {
                return Err(ModelError::invalid("pathloss.r0", format!("R0 must be positive, got {r0}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modified_gain_is_capped() {
        let m = PathLossModel::ModifiedExponent {
            k: 0.01,
            gamma: 4.0,
            r0: 10.0,
        };
        assert_eq!(m.gain(0.0), 0.01 * 1e-4);
        assert_eq!(m.gain(5.0), m.gain(10.0));
        assert!(m.gain(20.0) < m.gain(10.0));
        let e = PathLossModel::Exponent { k: 0.01, gamma: 4.0 };
        assert_eq!(e.gain(20.0), m.gain(20.0));
    }

    #[test]
    fn gamma_must_exceed_two() {
        let e = PathLossModel::Exponent { k: 1.0, gamma: 2.0 };
        let err = e.validate().unwrap_err().to_string();
        assert!(err.contains("gamma > 2"), "{err}");
        assert!(PathLossModel::Exponent { k: 1.0, gamma: 2.01 }.validate().is_ok());
        assert!(PathLossModel::ModifiedExponent {
            k: 1.0,
            gamma: 3.0,
            r0: 0.0
        }
        .validate()
        .is_err());
    }
}
