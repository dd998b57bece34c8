//! Numerical kernel shared by the analytic and simulation engines.

mod quadrature;
mod rng;
mod special;

pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_with_breaks, FailureKind, Integral, QuadratureError,
    QuadratureSpec,
};
pub use rng::RngStream;
pub use special::{binomial, compensated_sum, erfcx, poisson_pmf_prefix, q_function};

/// dB (or dBm) to linear (or mW).
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear (or mW) to dB (or dBm).
#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
