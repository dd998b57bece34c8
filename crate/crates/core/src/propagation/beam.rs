use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Interference power reduction `a(theta)` seen by a mobile at angle
/// `theta` off the look direction of an interfering base station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum BeamPattern {
    Omni,
    /// Uniform linear array of `n_t` elements, half-wavelength spacing,
    /// zero front-to-back ratio.
    Conventional { n_t: u32 },
}

const SINGULAR_GUARD: f64 = 1e-9;

impl BeamPattern {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Conventional { n_t: 0 } => Err(ModelError::invalid("beam.n_t", "antenna count must be positive")),
            _ => Ok(()),
        }
    }

    pub fn gain(&self, theta: f64) -> f64 {
        match *self {
            Self::Omni => 1.0,
            Self::Conventional { n_t } => {
                let theta = wrap_angle(theta);
                if theta.abs() >= FRAC_PI_2 {
                    return 0.0;
                }
                let x = FRAC_PI_2 * theta.sin();
                let den = x.sin();
                if den.abs() < SINGULAR_GUARD {
                    return 1.0;
                }
                let n = f64::from(n_t);
                let num = (n * x).sin();
                ((num * num) / (n * n * den * den)).min(1.0)
            }
        }
    }

    /// Angles in `(0, pi/2)` where the pattern vanishes; useful integration breaks.
    pub fn nulls(&self) -> Vec<f64> {
        match *self {
            Self::Omni => Vec::new(),
            Self::Conventional { n_t } => {
                let n = f64::from(n_t);
                (1..)
                    .map(|j| 2.0 * f64::from(j) / n)
                    .take_while(|&s| s < 1.0)
                    .map(f64::asin)
                    .collect()
            }
        }
    }

    pub fn is_omni(&self) -> bool {
        matches!(self, Self::Omni)
    }
}

fn wrap_angle(theta: f64) -> f64 {
    if (-PI..=PI).contains(&theta) {
        theta
    } else {
        (theta + PI).rem_euclid(2.0 * PI) - PI
    }
}
