use std::f64::consts::{LN_10, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::numerics::{q_function, RngStream};

/// Law of the slow-fading factor `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ShadowingModel {
    /// `H = 1`.
    None,
    /// `H = 10^(G/10)`, `G ~ N(mean_db, sigma_db^2)`.
    Lognormal { sigma_db: f64, mean_db: f64 },
}

impl ShadowingModel {
    pub fn lognormal(sigma_db: f64) -> Self {
        Self::Lognormal {
            sigma_db,
            mean_db: 0.0,
        }
    }

    /// Standard deviation of `ln H`.
    pub fn sigma_ln(&self) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::Lognormal { sigma_db, .. } => sigma_db * LN_10 / 10.0,
        }
    }

    /// Mean of `ln H`.
    pub fn mean_ln(&self) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::Lognormal { mean_db, .. } => mean_db * LN_10 / 10.0,
        }
    }

    /// `Some(h)` when `H` is the constant `h`.
    pub fn point_mass(&self) -> Option<f64> {
        match *self {
            Self::None => Some(1.0),
            Self::Lognormal { sigma_db: 0.0, .. } => Some(self.mean_ln().exp()),
            Self::Lognormal { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Self::Lognormal { sigma_db, mean_db } = *self {
            if !(sigma_db >= 0.0 && sigma_db.is_finite()) {
                return Err(ModelError::invalid(
                    "shadowing.sigma_db",
                    format!("must be finite and >= 0, got {sigma_db}"),
                ));
            }
            if !mean_db.is_finite() {
                return Err(ModelError::invalid("shadowing.mean_db", "must be finite"));
            }
        }
        Ok(())
    }

    /// `E(H^s)`.
    pub fn fractional_moment(&self, s: f64) -> f64 {
        let sigma = self.sigma_ln();
        (s * self.mean_ln() + 0.5 * s * s * sigma * sigma).exp()
    }

    /// `F_H(t) = P(H >= t)`.
    pub fn ccdf(&self, t: f64) -> f64 {
        if let Some(h) = self.point_mass() {
            return if t <= h { 1.0 } else { 0.0 };
        }
        if t <= 0.0 {
            return 1.0;
        }
        q_function((t.ln() - self.mean_ln()) / self.sigma_ln())
    }

    /// Density `p_H(t)`; zero for point-mass laws.
    pub fn density(&self, t: f64) -> f64 {
        if self.point_mass().is_some() || t <= 0.0 {
            return 0.0;
        }
        let sigma = self.sigma_ln();
        let z = (t.ln() - self.mean_ln()) / sigma;
        (-0.5 * z * z).exp() / (sigma * t * (2.0 * PI).sqrt())
    }

    /// Truncated moment `E(H^s ; H >= c)`.
    pub fn partial_moment_above(&self, s: f64, c: f64) -> f64 {
        if let Some(h) = self.point_mass() {
            return if h >= c { h.powf(s) } else { 0.0 };
        }
        if c <= 0.0 {
            return self.fractional_moment(s);
        }
        let sigma = self.sigma_ln();
        let shifted = (c.ln() - self.mean_ln() - s * sigma * sigma) / sigma;
        self.fractional_moment(s) * q_function(shifted)
    }

    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        match self.point_mass() {
            Some(h) => h,
            None => (self.mean_ln() + self.sigma_ln() * stream.normal()).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_semi_infinite, QuadratureSpec};

    #[test]
    fn moments_of_degenerate_laws() {
        assert_eq!(ShadowingModel::None.fractional_moment(0.5), 1.0);
        assert_eq!(ShadowingModel::lognormal(0.0).fractional_moment(0.5), 1.0);
        let h = ShadowingModel::Lognormal {
            sigma_db: 0.0,
            mean_db: 10.0,
        };
        assert!((h.fractional_moment(0.5) - 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn density_integrates_to_one_and_matches_moments() {
        let h = ShadowingModel::Lognormal {
            sigma_db: 6.0,
            mean_db: -2.0,
        };
        let spec = QuadratureSpec::default();
        let total = integrate_semi_infinite(|t| h.density(t), 0.0, &spec).unwrap();
        assert!((total.value - 1.0).abs() < 1e-8);
        let m = integrate_semi_infinite(|t| t.sqrt() * h.density(t), 0.0, &spec).unwrap();
        assert!((m.value - h.fractional_moment(0.5)).abs() < 1e-8 * m.value);
        let tail = integrate_semi_infinite(|t| t.sqrt() * h.density(t), 2.0, &spec).unwrap();
        assert!((tail.value - h.partial_moment_above(0.5, 2.0)).abs() < 1e-8 * tail.value);
        let ccdf = integrate_semi_infinite(|t| h.density(t), 0.7, &spec).unwrap();
        assert!((ccdf.value - h.ccdf(0.7)).abs() < 1e-9);
    }

    #[test]
    fn sampling_is_lognormal() {
        let h = ShadowingModel::lognormal(8.0);
        let mut s = RngStream::new(3, 0);
        let n = 200_000;
        let logs: Vec<f64> = (0..n).map(|_| h.sample(&mut s).ln()).collect();
        let mean = logs.iter().sum::<f64>() / n as f64;
        let var = logs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02);
        assert!((var.sqrt() / h.sigma_ln() - 1.0).abs() < 0.01);
    }
}
