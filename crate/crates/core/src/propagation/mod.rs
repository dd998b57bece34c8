//! Physical-layer models and the law of the path-loss–shadowing process.
//!
//! For a mobile at the origin, each base station `y` contributes the point
//! `xi = (h L(y) P)^-1` (its inverse mean path gain). The resulting process
//! on `(0, inf)` is Poisson with cumulative intensity `lambda_B * B(beta)`,
//! where `B(beta)` is the area-measure of positions whose inverse gain is at
//! most `beta`. Everything the analytic engine needs about geometry and
//! shadowing flows through `B` and its derivative.

mod beam;
pub(crate) mod law;
mod pathloss;
mod shadowing;

use serde::{Deserialize, Serialize};

pub use beam::BeamPattern;
pub use law::{b_of, b_of_quadrature, b_prime_of, b_prime_quadrature, median_xi0, xi_ccdf, xi_density};
pub use pathloss::PathLossModel;
pub use shadowing::ShadowingModel;

use crate::error::{ModelError, Result};

/// Gain of the array pattern `a(theta)`.
pub fn gain_a(beam: &BeamPattern, theta: f64) -> f64 {
    beam.gain(theta)
}

/// `E(H^s)` for `s` in `(0, 1]`.
pub fn fractional_moment(shadowing: &ShadowingModel, s: f64) -> f64 {
    shadowing.fractional_moment(s)
}

/// Everything static about the radio environment. Lengths in meters,
/// powers in mW, all gains linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationEnvironment {
    /// Base-station density per m^2.
    pub density: f64,
    /// Transmit power, mW.
    pub power: f64,
    pub pathloss: PathLossModel,
    pub shadowing: ShadowingModel,
    /// Noise power, mW.
    pub noise: f64,
    /// Rate of the exponential (Rayleigh power) fast fading.
    pub fading_rate: f64,
    /// Number of frequency groups.
    pub reuse: u32,
    pub beam: BeamPattern,
}

impl PropagationEnvironment {
    /// Omni, unit-power, interference-limited exponent-model environment.
    pub fn exponent(density: f64, k: f64, gamma: f64) -> Self {
        Self {
            density,
            power: 1.0,
            pathloss: PathLossModel::Exponent { k, gamma },
            shadowing: ShadowingModel::None,
            noise: 0.0,
            fading_rate: 1.0,
            reuse: 1,
            beam: BeamPattern::Omni,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("density", self.density)?;
        check_positive("power", self.power)?;
        check_positive("fading_rate", self.fading_rate)?;
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(ModelError::invalid("noise", format!("must be finite and >= 0, got {}", self.noise)));
        }
        if self.reuse == 0 {
            return Err(ModelError::invalid("reuse", "reuse factor must be a positive integer"));
        }
        self.pathloss.validate()?;
        self.shadowing.validate()?;
        self.beam.validate()
    }

    pub fn gamma(&self) -> f64 {
        self.pathloss.gamma()
    }

    /// `2 / gamma`, the exponent of `B` under the plain exponent model.
    pub fn delta(&self) -> f64 {
        2.0 / self.gamma()
    }

    /// True when `B` jumps (a deterministic `H` with a saturated path gain
    /// puts every station inside `R0` at the same `xi`).
    pub fn has_atom(&self) -> bool {
        matches!(self.pathloss, PathLossModel::ModifiedExponent { .. }) && self.shadowing.point_mass().is_some()
    }

    /// Inverse mean gain of a station at `distance` with shadowing `h`.
    #[inline]
    pub fn xi(&self, distance: f64, h: f64) -> f64 {
        1.0 / (h * self.pathloss.gain(distance) * self.power)
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::invalid(name, format!("must be finite and > 0, got {v}")))
    }
}
