//! Gaussian tail functions and small combinatorial helpers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Standard normal upper tail `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Scaled complementary error function `exp(x^2) * erfc(x)`, for `x >= 0`.
///
/// Stays finite where `exp(x^2)` alone would overflow.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 10.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Asymptotic series: 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!! / (2x^2)^k.
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= -((2 * k - 1) as f64) * inv;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (x * PI.sqrt())
}

/// `n choose m` as a float; exact for the small `n` used in inclusion-exclusion.
pub fn binomial(n: u32, m: u32) -> f64 {
    if m > n {
        return 0.0;
    }
    let m = m.min(n - m);
    let mut c = 1.0_f64;
    for i in 0..m {
        c = c * f64::from(n - i) / f64::from(i + 1);
    }
    c.round()
}

/// Poisson probabilities `P(N = i)` for `i = 0..=m` with mean `mean`,
/// evaluated in log space so large means do not underflow the first term.
pub fn poisson_pmf_prefix(mean: f64, m: usize) -> Vec<f64> {
    if mean <= 0.0 {
        let mut out = vec![0.0; m + 1];
        out[0] = 1.0;
        return out;
    }
    let ln_mean = mean.ln();
    let mut ln_term = -mean;
    let mut out = Vec::with_capacity(m + 1);
    out.push(ln_term.exp());
    for i in 1..=m {
        ln_term += ln_mean - (i as f64).ln();
        out.push(ln_term.exp());
    }
    out
}

/// Sum with Neumaier compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_function_landmarks() {
        assert_eq!(q_function(0.0), 0.5);
        let far = q_function(38.0);
        assert!((0.0..1e-300).contains(&far));
        // 90th percentile of the standard normal.
        assert!((q_function(1.2816) - 0.1).abs() < 5e-5);
        assert!((q_function(1.281_551_565_545) - 0.1).abs() < 1e-12);
    }

    /// Independent erfc: Maclaurin series of erf near zero, the Laplace
    /// continued fraction further out.
    fn erfc_oracle(z: f64) -> f64 {
        if z < 0.0 {
            return 2.0 - erfc_oracle(-z);
        }
        if z < 2.0 {
            let mut term = z;
            let mut sum = z;
            let mut n = 0.0;
            while term.abs() > 1e-18 {
                n += 1.0;
                term *= -z * z / n;
                sum += term / (2.0 * n + 1.0);
            }
            return 1.0 - 2.0 / PI.sqrt() * sum;
        }
        let mut f = z;
        for n in (1..=400).rev() {
            f = z + (f64::from(n) / 2.0) / f;
        }
        (-z * z).exp() / (PI.sqrt() * f)
    }

    #[test]
    fn q_function_matches_oracle() {
        for i in -800..=800 {
            let x = f64::from(i) * 0.01;
            let oracle = 0.5 * erfc_oracle(x * FRAC_1_SQRT_2);
            assert!((q_function(x) - oracle).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn q_function_symmetry_and_monotonicity() {
        let mut prev = 1.0;
        for i in -800..=800 {
            let x = f64::from(i) * 0.01;
            let q = q_function(x);
            assert!((q + q_function(-x) - 1.0).abs() < 1e-15);
            assert!(q <= prev);
            prev = q;
        }
    }

    #[test]
    fn erfcx_matches_direct_and_asymptotic() {
        for x in [0.0, 0.5, 2.0, 9.99] {
            assert!((erfcx(x) - (x * x).exp() * libm::erfc(x)).abs() < 1e-14 * erfcx(x));
        }
        // Continuity across the series switch.
        let lo = (9.999_f64 * 9.999).exp() * libm::erfc(9.999);
        assert!((erfcx(10.0) - lo).abs() < 1e-3 * lo);
        // Leading asymptote.
        let x = 1e6;
        assert!((erfcx(x) * x * PI.sqrt() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(3, 2), 3.0);
        assert_eq!(binomial(20, 10), 184_756.0);
        assert_eq!(binomial(2, 3), 0.0);
    }

    #[test]
    fn poisson_prefix_sums_to_one_eventually() {
        let p = poisson_pmf_prefix(3.0, 60);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let p = poisson_pmf_prefix(900.0, 2000);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p[0] == 0.0 || p[0] < 1e-300);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
