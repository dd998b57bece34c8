//! Outage and handover probabilities of the Poisson network.
//!
//! Every probability is an integral over the serving inverse gain `beta`
//! weighted by its density `lambda B'(beta) e^{-lambda B(beta)}`. Under the
//! plain exponent model the interference term factors as `C beta^delta`
//! times an angular constant `M_m`, and the integral collapses to one
//! dimension (or to `1/M_m` without noise).

mod kernels;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::numerics::{binomial, erfcx, integrate_semi_infinite, Integral, QuadratureSpec};
use crate::propagation::law::{solve_b, XiLaw};
use crate::propagation::{BeamPattern, PathLossModel, PropagationEnvironment};

use kernels::{angular_integral, interference_tail, interference_tail_gamma4, nested, slot_factor, Fallible};

/// Largest slot count accepted by the inclusion-exclusion sum.
pub const MAX_SLOTS: u32 = 20;

/// A probability together with an estimate of its numerical error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub abs_error: f64,
}

impl Evaluation {
    fn from_integral(r: &Integral) -> Self {
        Self {
            value: r.value,
            abs_error: r.abs_error,
        }
    }

    fn complement(self) -> Self {
        Self {
            value: 1.0 - self.value,
            abs_error: self.abs_error,
        }
    }
}

/// What is being asked of one environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageQuery {
    pub env: PropagationEnvironment,
    /// SINR threshold, linear.
    pub threshold: f64,
    /// Consecutive outage slots for handover.
    pub slots: u32,
}

impl CoverageQuery {
    pub fn new(env: PropagationEnvironment, threshold: f64, slots: u32) -> Self {
        Self { env, threshold, slots }
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        check_threshold(self.threshold)?;
        if self.slots == 0 {
            return Err(ModelError::invalid("slots", "slot count must be at least 1"));
        }
        if self.slots > MAX_SLOTS {
            return Err(ModelError::invalid(
                "slots",
                format!("slot count {} exceeds the supported maximum {MAX_SLOTS}", self.slots),
            ));
        }
        if self.env.has_atom() {
            return Err(ModelError::Unsupported(
                "modified path loss with deterministic shadowing has no density for the serving gain; \
                 use lognormal shadowing with sigma > 0 or the Monte Carlo engine"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Constants of the exponent-model reductions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticConstants {
    /// `B(beta) = c beta^{2/gamma}`.
    pub c: f64,
    /// Noise coefficient `N T mu (lambda C)^{-gamma/2}`.
    pub g: f64,
    /// `M_1 ..= M_n`.
    pub m: Vec<f64>,
}

impl AnalyticConstants {
    /// `M = M_1`.
    pub fn m1(&self) -> f64 {
        self.m[0]
    }
}

/// Quadrature settings for the analytic engine. The outer integral over
/// `beta` uses `spec`; integrals nested inside it use a tightened copy so
/// their error does not pollute the outer estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analytic {
    spec: QuadratureSpec,
    inner: QuadratureSpec,
}

impl Default for Analytic {
    fn default() -> Self {
        Self::with_spec(QuadratureSpec::default())
    }
}

impl Analytic {
    pub fn with_spec(spec: QuadratureSpec) -> Self {
        Self {
            spec,
            inner: spec.scaled(1e-2),
        }
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// `M_m(k, T, gamma)` for the given beam.
    pub fn m_m_constant(&self, k: u32, t: f64, gamma: f64, beam: &BeamPattern, m: u32) -> Result<Evaluation> {
        check_threshold(t)?;
        check_m(m)?;
        if k == 0 {
            return Err(ModelError::invalid("reuse", "reuse factor must be a positive integer"));
        }
        PathLossModel::Exponent { k: 1.0, gamma }.validate()?;
        let spec = if beam.is_omni() { self.spec } else { self.inner };
        let r = angular_integral(
            beam,
            |a| Ok(interference_tail(t * a, gamma, m, &spec, &self.spec)?.value),
            &self.spec,
            &self.spec,
        )?;
        let scale = 1.0 / (2.0 * PI * f64::from(k));
        Ok(Evaluation {
            value: 1.0 + scale * r.value,
            abs_error: scale * r.abs_error,
        })
    }

    /// `M` for `gamma = 4`, using the closed form of the radial integral.
    pub fn m_constant_gamma4(&self, k: u32, t: f64, beam: &BeamPattern) -> Result<Evaluation> {
        check_threshold(t)?;
        if k == 0 {
            return Err(ModelError::invalid("reuse", "reuse factor must be a positive integer"));
        }
        let r = angular_integral(beam, |a| Ok(interference_tail_gamma4(t * a)), &self.spec, &self.spec)?;
        let scale = 1.0 / (2.0 * PI * f64::from(k));
        Ok(Evaluation {
            value: 1.0 + scale * r.value,
            abs_error: scale * r.abs_error,
        })
    }

    pub fn constants(&self, query: &CoverageQuery) -> Result<AnalyticConstants> {
        query.validate()?;
        let env = &query.env;
        let law = XiLaw::new(env);
        let c = law.exponent_coefficient();
        let g = noise_coefficient(env, query.threshold, c);
        let m = (1..=query.slots)
            .map(|m| {
                self.m_m_constant(env.reuse, query.threshold, env.gamma(), &env.beam, m)
                    .map(|e| e.value)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AnalyticConstants { c, g, m })
    }

    /// `D_m(beta)` by direct quadrature of the double integral.
    pub fn d_m_quadrature(&self, env: &PropagationEnvironment, beta: f64, t: f64, m: u32) -> Result<Evaluation> {
        check_beta(beta)?;
        check_threshold(t)?;
        check_m(m)?;
        env.validate()?;
        if env.has_atom() {
            return Err(ModelError::Unsupported("B' has an atom for this environment".into()));
        }
        let law = XiLaw::new(env);
        let specs = NestedSpecs {
            radial: self.inner,
            angular: self.spec,
            outer: self.spec,
        };
        let r = d_generic(&law, &env.beam, beta, t, m, specs)?;
        Ok(Evaluation::from_integral(&r))
    }

    /// `D(beta)`; uses the exponent-model reduction when available.
    pub fn d_of(&self, env: &PropagationEnvironment, beta: f64, t: f64) -> Result<Evaluation> {
        self.d_m_of(env, beta, t, 1)
    }

    pub fn d_m_of(&self, env: &PropagationEnvironment, beta: f64, t: f64, m: u32) -> Result<Evaluation> {
        if !matches!(env.pathloss, PathLossModel::Exponent { .. }) {
            return self.d_m_quadrature(env, beta, t, m);
        }
        check_beta(beta)?;
        env.validate()?;
        let c = XiLaw::new(env).exponent_coefficient();
        let mm = self.m_m_constant(env.reuse, t, env.gamma(), &env.beam, m)?;
        let scale = c * beta.powf(env.delta()) * 2.0 * PI * f64::from(env.reuse);
        Ok(Evaluation {
            value: scale * (mm.value - 1.0),
            abs_error: scale * mm.abs_error,
        })
    }

    /// Coverage probability conditioned on the serving inverse gain `beta`.
    pub fn coverage_given_xi0(&self, env: &PropagationEnvironment, beta: f64, t: f64) -> Result<Evaluation> {
        let d = self.d_of(env, beta, t)?;
        let w = env.density / (2.0 * PI * f64::from(env.reuse));
        let v = (-env.noise * t * env.fading_rate * beta - w * d.value).exp();
        Ok(Evaluation {
            value: v,
            abs_error: v * w * d.abs_error,
        })
    }

    pub fn outage_probability(&self, query: &CoverageQuery) -> Result<Evaluation> {
        Ok(self.q_m(query, 1)?.complement())
    }

    /// Outage by the full nested integral over `beta`, whatever the model.
    pub fn outage_general(&self, query: &CoverageQuery) -> Result<Evaluation> {
        Ok(self.q_m_general(query, 1)?.complement())
    }

    /// Outage by the one-dimensional exponent-model reduction.
    pub fn outage_reduced(&self, query: &CoverageQuery) -> Result<Evaluation> {
        Ok(self.q_m_reduced(query, 1)?.complement())
    }

    /// Probability that the mobile is covered in each of `m` slots.
    pub fn q_m(&self, query: &CoverageQuery, m: u32) -> Result<Evaluation> {
        query.validate()?;
        check_m(m)?;
        match query.env.pathloss {
            PathLossModel::Exponent { .. } if query.env.noise == 0.0 => {
                let mm = self.m_m_constant(query.env.reuse, query.threshold, query.env.gamma(), &query.env.beam, m)?;
                Ok(Evaluation {
                    value: 1.0 / mm.value,
                    abs_error: mm.abs_error / (mm.value * mm.value),
                })
            }
            PathLossModel::Exponent { .. } => self.q_m_reduced(query, m),
            PathLossModel::ModifiedExponent { .. } => self.q_m_general(query, m),
        }
    }

    /// `int_0^inf e^{-M_m a - m G a^{gamma/2}} da`.
    pub fn q_m_reduced(&self, query: &CoverageQuery, m: u32) -> Result<Evaluation> {
        query.validate()?;
        check_m(m)?;
        let env = &query.env;
        if !matches!(env.pathloss, PathLossModel::Exponent { .. }) {
            return Err(ModelError::Unsupported(
                "the one-dimensional reduction needs the plain exponent path loss".into(),
            ));
        }
        let mm = self.m_m_constant(env.reuse, query.threshold, env.gamma(), &env.beam, m)?;
        let g = f64::from(m) * noise_coefficient(env, query.threshold, XiLaw::new(env).exponent_coefficient());
        let half_gamma = 0.5 * env.gamma();
        let r = integrate_semi_infinite(|a: f64| (-mm.value * a - g * a.powf(half_gamma)).exp(), 0.0, &self.spec)?;
        // d/dM of the integral is bounded by 1/M^2 in magnitude.
        Ok(Evaluation {
            value: r.value,
            abs_error: r.abs_error + mm.abs_error / (mm.value * mm.value),
        })
    }

    /// `q_m` by nested quadrature over `beta`, `theta` and the interferer tail.
    pub fn q_m_general(&self, query: &CoverageQuery, m: u32) -> Result<Evaluation> {
        query.validate()?;
        check_m(m)?;
        let env = &query.env;
        let law = XiLaw::new(env);
        let t = query.threshold;
        let lambda = env.density;
        let w = lambda / (2.0 * PI * f64::from(env.reuse));
        let noise = f64::from(m) * env.noise * t * env.fading_rate;
        let specs = NestedSpecs {
            radial: self.inner,
            angular: self.inner,
            outer: self.spec,
        };
        let fallible = Fallible::new();
        let conditional = |beta: f64| -> Result<f64> {
            let d = d_generic(&law, &env.beam, beta, t, m, specs)?;
            Ok((-noise * beta - w * d.value).exp())
        };
        let r = match env.pathloss {
            PathLossModel::Exponent { .. } => {
                // alpha = lambda C beta^delta turns the serving density into e^{-alpha}.
                let lc = lambda * law.exponent_coefficient();
                let inv_delta = 0.5 * env.gamma();
                let f = |alpha: f64| {
                    let weight = (-alpha).exp();
                    if weight == 0.0 || alpha == 0.0 {
                        return weight;
                    }
                    let beta = (alpha / lc).powf(inv_delta);
                    weight * fallible.value(conditional(beta))
                };
                fallible.finish(integrate_semi_infinite(f, 0.0, &self.spec))?
            }
            PathLossModel::ModifiedExponent { .. } => {
                let scale = solve_b(&law, std::f64::consts::LN_2 / lambda);
                let f = |x: f64| {
                    if x == 0.0 {
                        return 0.0;
                    }
                    let beta = scale * x;
                    let weight = lambda * law.b_prime(beta) * (-lambda * law.b(beta)).exp() * scale;
                    if weight == 0.0 || !weight.is_finite() {
                        return 0.0;
                    }
                    weight * fallible.value(conditional(beta))
                };
                fallible.finish(integrate_semi_infinite(f, 0.0, &self.spec))?
            }
        };
        Ok(Evaluation::from_integral(&r))
    }

    /// Probability of outage in each of `n = query.slots` slots.
    pub fn handover_probability(&self, query: &CoverageQuery) -> Result<Evaluation> {
        query.validate()?;
        let n = query.slots;
        let mut terms = Vec::with_capacity(n as usize + 1);
        let mut abs_error = 0.0;
        terms.push(1.0);
        for m in 1..=n {
            let q = self.q_m(query, m)?;
            let c = binomial(n, m);
            let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
            terms.push(sign * c * q.value);
            abs_error += c * q.abs_error;
        }
        let value = crate::numerics::compensated_sum(terms);
        if !(-1e-9..=1.0 + 1e-9).contains(&value) {
            return Err(ModelError::Cancellation {
                what: "handover probability",
                value,
            });
        }
        Ok(Evaluation {
            value: value.clamp(0.0, 1.0),
            abs_error,
        })
    }
}

/// `int_0^inf e^{-M a - G a^2} da` in closed form, via the scaled
/// complementary error function: `(1/2) sqrt(pi/G) erfcx(M / (2 sqrt G))`.
pub fn coverage_gamma4_closed(m: f64, g: f64) -> f64 {
    if g == 0.0 {
        return 1.0 / m;
    }
    0.5 * (PI / g).sqrt() * erfcx(m / (2.0 * g.sqrt()))
}

fn noise_coefficient(env: &PropagationEnvironment, t: f64, c: f64) -> f64 {
    if env.noise == 0.0 {
        return 0.0;
    }
    env.noise * t * env.fading_rate * (env.density * c).powf(-0.5 * env.gamma())
}

/// Tolerances of the radial and angular integrals inside `D_m`, and the
/// tolerance of the integral that consumes the result.
#[derive(Clone, Copy)]
struct NestedSpecs {
    radial: QuadratureSpec,
    angular: QuadratureSpec,
    outer: QuadratureSpec,
}

/// `D_m(beta) = beta int dtheta int_1^inf B'(beta u) (1 - (1 + T a / u)^-m) du`.
fn d_generic(
    law: &XiLaw,
    beam: &BeamPattern,
    beta: f64,
    t: f64,
    m: u32,
    specs: NestedSpecs,
) -> Result<Integral> {
    let NestedSpecs { radial, angular, outer } = specs;
    let tail = |a: f64| -> Result<f64> {
        let c = t * a;
        let r = nested(
            integrate_semi_infinite(|u: f64| law.b_prime(beta * u) * slot_factor(c / u, m), 1.0, &radial),
            &outer,
        )?;
        Ok(r.value)
    };
    let r = angular_integral(beam, tail, &angular, &outer)?;
    Ok(Integral {
        value: beta * r.value,
        abs_error: beta * r.abs_error,
        evaluations: r.evaluations,
    })
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ModelError::invalid("threshold", format!("must be finite and > 0, got {t}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(ModelError::invalid("beta", format!("must be finite and > 0, got {beta}")))
    }
}

fn check_m(m: u32) -> Result<()> {
    if (1..=MAX_SLOTS).contains(&m) {
        Ok(())
    } else {
        Err(ModelError::invalid("m", format!("slot index must be in 1..={MAX_SLOTS}, got {m}")))
    }
}

pub fn m_m_constant(k: u32, t: f64, gamma: f64, beam: &BeamPattern, m: u32) -> Result<f64> {
    Ok(Analytic::default().m_m_constant(k, t, gamma, beam, m)?.value)
}

pub fn d_of(env: &PropagationEnvironment, beta: f64, t: f64) -> Result<f64> {
    Ok(Analytic::default().d_of(env, beta, t)?.value)
}

pub fn coverage_given_xi0(env: &PropagationEnvironment, beta: f64, t: f64) -> Result<f64> {
    Ok(Analytic::default().coverage_given_xi0(env, beta, t)?.value)
}

pub fn outage_probability(query: &CoverageQuery) -> Result<f64> {
    Ok(Analytic::default().outage_probability(query)?.value)
}

pub fn q_m(query: &CoverageQuery, m: u32) -> Result<f64> {
    Ok(Analytic::default().q_m(query, m)?.value)
}

pub fn handover_probability(query: &CoverageQuery) -> Result<f64> {
    Ok(Analytic::default().handover_probability(query)?.value)
}
