//! The integrals behind the coverage formulas.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ModelError, Result};
use crate::numerics::{integrate_semi_infinite, integrate_with_breaks, Integral, QuadratureError, QuadratureSpec};
use crate::propagation::BeamPattern;

/// `1 - (1 + x)^-m`, accurate for small `x`.
#[inline]
pub(crate) fn slot_factor(x: f64, m: u32) -> f64 {
    if m == 1 {
        x / (1.0 + x)
    } else {
        -(-f64::from(m) * x.ln_1p()).exp_m1()
    }
}

/// `int_{-pi}^{pi} f(a(theta)) dtheta` for an `f` with `f(0) = 0`.
pub(crate) fn angular_integral<F>(beam: &BeamPattern, f: F, spec: &QuadratureSpec, outer: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    if beam.is_omni() {
        let v = f(1.0)?;
        return Ok(Integral {
            value: 2.0 * PI * v,
            abs_error: 0.0,
            evaluations: 1,
        });
    }
    let failure = Cell::new(None);
    let g = |theta: f64| {
        let a = beam.gain(theta);
        if a == 0.0 {
            return 0.0;
        }
        match f(a) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let half = nested(integrate_with_breaks(g, 0.0, FRAC_PI_2, &beam.nulls(), spec), outer);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let half = half?;
    Ok(Integral {
        value: 2.0 * half.value,
        abs_error: 2.0 * half.abs_error,
        evaluations: half.evaluations,
    })
}

/// `int_1^inf (1 - (1 + c u^{-gamma/2})^-m) du` with `c = T a(theta)`.
pub(crate) fn interference_tail(c: f64, gamma: f64, m: u32, spec: &QuadratureSpec, outer: &QuadratureSpec) -> Result<Integral> {
    if c == 0.0 {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let half_gamma = 0.5 * gamma;
    let r = if m == 1 {
        nested(integrate_semi_infinite(|u: f64| c / (c + u.powf(half_gamma)), 1.0, spec), outer)?
    } else {
        nested(integrate_semi_infinite(|u: f64| slot_factor(c * u.powf(-half_gamma), m), 1.0, spec), outer)?
    };
    Ok(r)
}

/// Closed form of `interference_tail` for `gamma = 4`, `m = 1`:
/// `sqrt(c) (pi/2 - atan(1/sqrt(c)))`.
pub(crate) fn interference_tail_gamma4(c: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let r = c.sqrt();
    r * (FRAC_PI_2 - (1.0 / r).atan())
}

/// Accepts an unconverged nested integral whose reported error already
/// meets the looser `outer` tolerance.
pub(crate) fn nested(
    r: std::result::Result<Integral, QuadratureError>,
    outer: &QuadratureSpec,
) -> std::result::Result<Integral, QuadratureError> {
    match r {
        Err(QuadratureError::NotConverged {
            estimate, abs_error, ..
        }) if abs_error <= outer.abs_tol.max(outer.rel_tol * estimate.abs()) => Ok(Integral {
            value: estimate,
            abs_error,
            evaluations: 0,
        }),
        other => other,
    }
}

/// Runs a closure-based integration whose integrand can fail, surfacing the
/// first failure instead of a silently zeroed sample.
pub(crate) struct Fallible {
    failure: Cell<Option<ModelError>>,
}

impl Fallible {
    pub(crate) fn new() -> Self {
        Self {
            failure: Cell::new(None),
        }
    }

    pub(crate) fn value(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                let prev = self.failure.take();
                self.failure.set(prev.or(Some(e)));
                0.0
            }
        }
    }

    pub(crate) fn finish(&self, r: std::result::Result<Integral, QuadratureError>) -> Result<Integral> {
        if let Some(e) = self.failure.take() {
            return Err(e);
        }
        Ok(r?)
    }
}
