use std::f64::consts::PI;

use super::{PathLossModel, PropagationEnvironment, ShadowingModel};
use crate::error::{ModelError, Result};
use crate::numerics::{integrate_semi_infinite, integrate_with_breaks, poisson_pmf_prefix, Integral, QuadratureSpec};

/// Precomputed closed forms of `B` and `B'` for one environment.
#[derive(Debug, Clone, Copy)]
pub(crate) struct XiLaw {
    delta: f64,
    pk: f64,
    /// `R0^gamma`, zero for the plain exponent model.
    r0_pow: f64,
    r0: f64,
    shadowing: ShadowingModel,
}

impl XiLaw {
    pub(crate) fn new(env: &PropagationEnvironment) -> Self {
        let gamma = env.gamma();
        let r0 = env.pathloss.r0();
        Self {
            delta: 2.0 / gamma,
            pk: env.power * env.pathloss.k(),
            r0_pow: r0.powf(gamma),
            r0,
            shadowing: env.shadowing,
        }
    }

    /// Coefficient `C` of `B(beta) = C beta^delta` under the plain exponent model.
    pub(crate) fn exponent_coefficient(&self) -> f64 {
        PI * self.pk.powf(self.delta) * self.shadowing.fractional_moment(self.delta)
    }

    #[inline]
    pub(crate) fn b(&self, beta: f64) -> f64 {
        if beta <= 0.0 {
            return 0.0;
        }
        let area = PI * (self.pk * beta).powf(self.delta);
        if self.r0_pow == 0.0 {
            area * self.shadowing.fractional_moment(self.delta)
        } else {
            area * self.shadowing.partial_moment_above(self.delta, self.r0_pow / (self.pk * beta))
        }
    }

    #[inline]
    pub(crate) fn b_prime(&self, beta: f64) -> f64 {
        let scaling = self.delta * self.b(beta) / beta;
        if self.r0_pow == 0.0 {
            return scaling;
        }
        // Stations inside R0 all sit at inverse gain c / h; their mass enters
        // through the density of H at the threshold.
        let c = self.r0_pow / (self.pk * beta);
        scaling + PI * self.r0 * self.r0 * (c / beta) * self.shadowing.density(c)
    }
}

fn check_beta(beta: f64, strict: bool) -> Result<()> {
    let ok = beta.is_finite() && if strict { beta > 0.0 } else { beta >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(ModelError::invalid(
            "beta",
            format!("inverse path gain must be {} 0, got {beta}", if strict { ">" } else { ">=" }),
        ))
    }
}

/// `B(beta)`: expected number of stations per unit density with inverse
/// mean gain at most `beta`.
pub fn b_of(env: &PropagationEnvironment, beta: f64) -> Result<f64> {
    check_beta(beta, false)?;
    Ok(XiLaw::new(env).b(beta))
}

/// `B'(beta)`. Under a deterministic `H` with the modified model the jump of
/// `B` at the saturation threshold is not included.
pub fn b_prime_of(env: &PropagationEnvironment, beta: f64) -> Result<f64> {
    check_beta(beta, true)?;
    Ok(XiLaw::new(env).b_prime(beta))
}

/// Radial integration breaks in units of `r* = (P K beta)^(1/gamma)`.
fn radial_breaks(env: &PropagationEnvironment, r_star: f64) -> Vec<f64> {
    let mut breaks = Vec::new();
    if let PathLossModel::ModifiedExponent { r0, .. } = env.pathloss {
        breaks.push(r0 / r_star);
    }
    if let Some(h) = env.shadowing.point_mass() {
        breaks.push(h.powf(1.0 / env.gamma()));
    }
    breaks
}

fn radial_integral<F: Fn(f64) -> f64>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Integral> {
    let split = breaks.iter().copied().fold(1.0_f64, f64::max);
    let head = integrate_with_breaks(&f, 0.0, split, breaks, spec)?;
    let tail = integrate_semi_infinite(&f, split, spec)?;
    Ok(Integral {
        value: head.value + tail.value,
        abs_error: head.abs_error + tail.abs_error,
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// `B(beta)` from its defining area integral, `2 pi int r F_H((L(r) P beta)^-1) dr`,
/// with no closed-form shortcuts.
pub fn b_of_quadrature(env: &PropagationEnvironment, beta: f64, spec: &QuadratureSpec) -> Result<Integral> {
    check_beta(beta, false)?;
    if beta == 0.0 {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let r_star = (env.power * env.pathloss.k() * beta).powf(1.0 / env.gamma());
    let scale = 2.0 * PI * r_star * r_star;
    let integrand = |x: f64| {
        let g = env.pathloss.gain(r_star * x) * env.power * beta;
        x * env.shadowing.ccdf(1.0 / g)
    };
    let r = radial_integral(integrand, &radial_breaks(env, r_star), spec)?;
    Ok(Integral {
        value: scale * r.value,
        abs_error: scale * r.abs_error,
        evaluations: r.evaluations,
    })
}

/// `B'(beta) = beta^-2 int (L(z) P)^-1 p_H((beta L(z) P)^-1) dz` by quadrature.
pub fn b_prime_quadrature(env: &PropagationEnvironment, beta: f64, spec: &QuadratureSpec) -> Result<Integral> {
    check_beta(beta, true)?;
    if env.shadowing.point_mass().is_some() {
        return Err(ModelError::Unsupported(
            "B' by quadrature needs a shadowing law with a density".into(),
        ));
    }
    let r_star = (env.power * env.pathloss.k() * beta).powf(1.0 / env.gamma());
    let scale = 2.0 * PI * r_star * r_star / beta;
    // With u = beta L P the integrand is x / u * p_H(1 / u).
    let integrand = |x: f64| {
        let u = env.pathloss.gain(r_star * x) * env.power * beta;
        x / u * env.shadowing.density(1.0 / u)
    };
    let r = radial_integral(integrand, &radial_breaks(env, r_star), spec)?;
    Ok(Integral {
        value: scale * r.value,
        abs_error: scale * r.abs_error,
        evaluations: r.evaluations,
    })
}

/// `P(xi_m > t)`: at most `m` points of the process in `[0, t]`.
pub fn xi_ccdf(env: &PropagationEnvironment, m: usize, t: f64) -> Result<f64> {
    let mean = env.density * b_of(env, t)?;
    let sum: f64 = poisson_pmf_prefix(mean, m).iter().sum();
    Ok(sum.min(1.0))
}

/// Density of `xi_m`: `lambda B'(t) (lambda B(t))^m e^{-lambda B(t)} / m!`.
pub fn xi_density(env: &PropagationEnvironment, m: usize, t: f64) -> Result<f64> {
    let law = XiLaw::new(env);
    check_beta(t, true)?;
    let mean = env.density * law.b(t);
    let pmf = poisson_pmf_prefix(mean, m)[m];
    Ok(env.density * law.b_prime(t) * pmf)
}

/// Median of the serving inverse gain: solves `lambda B(beta) = ln 2`.
pub fn median_xi0(env: &PropagationEnvironment) -> f64 {
    solve_b(&XiLaw::new(env), std::f64::consts::LN_2 / env.density)
}

/// Solve `B(beta) = target` by bisection on `ln beta`.
pub(crate) fn solve_b(law: &XiLaw, target: f64) -> f64 {
    let guess = (target / law.exponent_coefficient()).powf(1.0 / law.delta);
    let (mut lo, mut hi) = (guess, guess);
    while law.b(lo) > target {
        lo *= 0.5;
    }
    while law.b(hi) < target {
        hi *= 2.0;
    }
    let (mut llo, mut lhi) = (lo.ln(), hi.ln());
    for _ in 0..200 {
        let mid = 0.5 * (llo + lhi);
        if law.b(mid.exp()) < target {
            llo = mid;
        } else {
            lhi = mid;
        }
        if lhi - llo < 1e-15 {
            break;
        }
    }
    (0.5 * (llo + lhi)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::BeamPattern;

    fn env(pathloss: PathLossModel, shadowing: ShadowingModel) -> PropagationEnvironment {
        PropagationEnvironment {
            density: 1.0 / (PI * 500.0 * 500.0),
            power: 1.0,
            pathloss,
            shadowing,
            noise: 0.0,
            fading_rate: 1.0,
            reuse: 1,
            beam: BeamPattern::Omni,
        }
    }

    fn unit_exponent(shadowing: ShadowingModel) -> PropagationEnvironment {
        env(PathLossModel::Exponent { k: 1.0, gamma: 4.0 }, shadowing)
    }

    fn all_models() -> Vec<PropagationEnvironment> {
        let mut v = Vec::new();
        for pl in [
            PathLossModel::Exponent { k: 0.01, gamma: 3.5 },
            PathLossModel::ModifiedExponent {
                k: 0.01,
                gamma: 3.5,
                r0: 0.1,
            },
        ] {
            for sh in [ShadowingModel::None, ShadowingModel::lognormal(8.0)] {
                v.push(env(pl, sh));
            }
        }
        v
    }

    #[test]
    fn exponent_closed_form_examples() {
        let e = unit_exponent(ShadowingModel::None);
        assert!((b_of(&e, 1.0).unwrap() - PI).abs() < 1e-15);
        assert!((b_prime_of(&e, 1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(b_of(&e, 0.0).unwrap(), 0.0);
        let ln = unit_exponent(ShadowingModel::lognormal(8.0));
        let moment = ShadowingModel::lognormal(8.0).fractional_moment(0.5);
        assert!((b_of(&ln, 1.0).unwrap() - PI * moment).abs() < 1e-14);
        assert!((b_of(&ln, 1.0).unwrap() - 4.8022).abs() < 3e-3);
    }

    #[test]
    fn modified_with_vanishing_r0_recovers_exponent() {
        let m = env(
            PathLossModel::ModifiedExponent {
                k: 1.0,
                gamma: 4.0,
                r0: 1e-9,
            },
            ShadowingModel::None,
        );
        assert!((b_of(&m, 1.0).unwrap() - PI).abs() < 1e-14);
        let m = env(
            PathLossModel::ModifiedExponent {
                k: 1.0,
                gamma: 4.0,
                r0: 1e-6,
            },
            ShadowingModel::lognormal(8.0),
        );
        let e = unit_exponent(ShadowingModel::lognormal(8.0));
        assert!((b_of(&m, 1.0).unwrap() / b_of(&e, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_shadowing_saturates_inside_r0() {
        // B jumps from 0 to pi R0^2 at beta0 = R0^gamma / (P K).
        let m = env(
            PathLossModel::ModifiedExponent {
                k: 0.01,
                gamma: 4.0,
                r0: 1.0,
            },
            ShadowingModel::None,
        );
        assert!(m.has_atom());
        assert_eq!(b_of(&m, 99.0).unwrap(), 0.0);
        assert!((b_of(&m, 100.0).unwrap() - PI).abs() < 1e-12);
        assert!((b_of(&m, 400.0).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_beta() {
        let e = unit_exponent(ShadowingModel::None);
        assert!(b_of(&e, -1.0).is_err());
        assert!(b_prime_of(&e, 0.0).is_err());
        assert!(b_of(&e, f64::NAN).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for e in all_models() {
            for beta in [0.1, 1.0, 10.0, 100.0, 3.0] {
                let h = 1e-5 * beta;
                let fd = (b_of(&e, beta + h).unwrap() - b_of(&e, beta - h).unwrap()) / (2.0 * h);
                let d = b_prime_of(&e, beta).unwrap();
                assert!((fd / d - 1.0).abs() < 1e-6, "{e:?} beta={beta}: fd={fd} d={d}");
                assert!(d > 0.0);
            }
        }
    }

    #[test]
    fn closed_forms_match_area_integrals() {
        let spec = QuadratureSpec::new(0.0, 1e-11, 2000).unwrap();
        for e in all_models() {
            for beta in [0.1, 1.0, 10.0, 100.0] {
                let closed = b_of(&e, beta).unwrap();
                let quad = b_of_quadrature(&e, beta, &spec).unwrap();
                assert!((quad.value / closed - 1.0).abs() < 1e-9, "{e:?} beta={beta}: {quad:?} vs {closed}");
                if e.shadowing.point_mass().is_none() {
                    let closed = b_prime_of(&e, beta).unwrap();
                    let quad = b_prime_quadrature(&e, beta, &spec).unwrap();
                    assert!((quad.value / closed - 1.0).abs() < 1e-9, "{e:?} beta={beta}: {quad:?} vs {closed}");
                }
            }
        }
    }

    #[test]
    fn xi_order_statistics() {
        let e = unit_exponent(ShadowingModel::None);
        // lambda B(t) = 1 at t = (1 / (lambda pi))^2.
        let t = (1.0 / (e.density * PI)).powi(2);
        assert!((xi_ccdf(&e, 0, t).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
        assert!((xi_ccdf(&e, 1, t).unwrap() - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((xi_ccdf(&e, 400, t).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(xi_ccdf(&e, 0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn xi_density_integrates_to_one() {
        // The factorials are needed for normalization.
        let e = env(PathLossModel::Exponent { k: 0.01, gamma: 3.0 }, ShadowingModel::lognormal(6.0));
        let scale = median_xi0(&e);
        for m in 0..4 {
            let r = integrate_semi_infinite(
                |x| scale * xi_density(&e, m, scale * x).unwrap(),
                0.0,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!((r.value - 1.0).abs() < 1e-7, "m={m}: {r:?}");
        }
    }

    #[test]
    fn median_solves_void_probability() {
        for e in all_models() {
            let b = median_xi0(&e);
            assert!((xi_ccdf(&e, 0, b).unwrap() - 0.5).abs() < 1e-12, "{e:?}");
        }
    }
}
