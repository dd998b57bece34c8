//! Monte Carlo estimates checked against the closed forms, and vice versa.

use std::f64::consts::PI;

use cellcov_core::analytic::{self, Analytic, CoverageQuery};
use cellcov_core::montecarlo::{self, SimConfig};
use cellcov_core::numerics::db_to_linear;
use cellcov_core::propagation::{xi_ccdf, b_of, BeamPattern, PropagationEnvironment, ShadowingModel};

const R_G: f64 = 10_000.0;

fn env(gamma: f64, k: u32) -> PropagationEnvironment {
    let mut env = PropagationEnvironment::exponent(1.0 / (PI * 500.0 * 500.0), 0.01, gamma);
    env.reuse = k;
    env
}

fn within(est: f64, stderr: f64, target: f64, sigmas: f64) -> bool {
    (est - target).abs() <= sigmas * stderr
}

#[test]
fn station_count_is_poisson() {
    let e = env(4.0, 1);
    // lambda pi R^2 = 100.
    let sim = SimConfig::new(5000.0, 10_000, 21);
    let counts = montecarlo::xi_counts(&e, &sim, &[f64::INFINITY]).unwrap();
    let n = counts.len() as f64;
    let mean = counts.iter().map(|c| f64::from(c[0])).sum::<f64>() / n;
    let var = counts.iter().map(|c| (f64::from(c[0]) - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(within(mean, (100.0 / n).sqrt(), 100.0, 4.0), "mean {mean}");
    // Var of the sample variance for Poisson(mu): (mu + 2 mu^2) / n approximately.
    assert!(within(var, ((100.0 + 2.0e4) / n).sqrt(), 100.0, 4.0), "var {var}");
}

#[test]
fn serving_gain_follows_the_void_probability() {
    let mut e = env(3.5, 1);
    e.shadowing = ShadowingModel::lognormal(8.0);
    let sim = SimConfig::new(R_G, 100_000, 5);
    let samples = montecarlo::simulate(&e, &sim, 1).unwrap();
    let mut xi0 = samples.serving_xi().to_vec();
    xi0.sort_by(f64::total_cmp);
    let n = xi0.len() as f64;
    let mut ks = 0.0_f64;
    for (i, &x) in xi0.iter().enumerate() {
        let cdf = 1.0 - xi_ccdf(&e, 0, x).unwrap();
        ks = ks.max((cdf - i as f64 / n).abs()).max((cdf - (i + 1) as f64 / n).abs());
    }
    assert!(ks < 0.01, "KS distance {ks}");
}

#[test]
fn outage_matches_closed_form() {
    let e = env(4.0, 1);
    let sim = SimConfig::new(R_G, 10_000, 7);
    let est = montecarlo::estimate_outage(&e, &sim, 10.0).unwrap();
    let p = analytic::outage_probability(&CoverageQuery::new(e, 10.0, 1)).unwrap();
    assert!(within(est.mean, est.stderr, p, 3.0), "{est:?} vs {p}");
}

#[test]
fn multi_slot_estimates_match_closed_forms() {
    let e = env(4.0, 1);
    let sim = SimConfig::new(R_G, 10_000, 8);
    let samples = montecarlo::simulate(&e, &sim, 3).unwrap();
    let q = CoverageQuery::new(e, 10.0, 3);
    let q2 = analytic::q_m(&q, 2).unwrap();
    let joint = samples.joint_coverage(10.0, 2).unwrap();
    assert!(within(joint.mean, joint.stderr, q2, 3.0), "{joint:?} vs {q2}");
    let p_ho = analytic::handover_probability(&q).unwrap();
    let est = samples.handover(10.0, 3).unwrap();
    assert!(within(est.mean, est.stderr, p_ho, 3.0), "{est:?} vs {p_ho}");
}

#[test]
fn handover_with_noise_uses_slot_scaled_noise() {
    // Noise comparable to interference separates e^{-m N T mu beta} from e^{-N T mu beta}.
    let mut e = env(4.0, 3);
    e.noise = 1e-12;
    e.shadowing = ShadowingModel::lognormal(6.0);
    let t = db_to_linear(0.0);
    let sim = SimConfig::new(R_G, 40_000, 12);
    let samples = montecarlo::simulate(&e, &sim, 2).unwrap();
    let q = CoverageQuery::new(e, t, 2);
    let q1 = analytic::q_m(&q, 1).unwrap();
    let q2 = analytic::q_m(&q, 2).unwrap();
    let j1 = samples.joint_coverage(t, 1).unwrap();
    let j2 = samples.joint_coverage(t, 2).unwrap();
    assert!(q1 > 0.2 && q1 < 0.8, "noise level should matter: q1 = {q1}");
    assert!(within(j1.mean, j1.stderr, q1, 3.0), "{j1:?} vs {q1}");
    assert!(within(j2.mean, j2.stderr, q2, 3.0), "{j2:?} vs {q2}");
}

#[test]
fn conditional_coverage_matches_filtered_snapshots() {
    let mut e = env(4.0, 3);
    e.noise = 1e-12;
    let t = 2.0;
    let sim = SimConfig::new(R_G, 200_000, 13);
    let samples = montecarlo::simulate(&e, &sim, 1).unwrap();
    let beta = cellcov_core::propagation::median_xi0(&e);
    let eps = 0.02;
    let (mut hits, mut n) = (0u64, 0u64);
    for (i, &x) in samples.serving_xi().iter().enumerate() {
        if (x - beta).abs() <= eps * beta {
            n += 1;
            hits += u64::from(samples.slot_values(i)[0] >= t);
        }
    }
    let p = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let a = Analytic::default();
    let centre = a.coverage_given_xi0(&e, beta, t).unwrap().value;
    // The window average differs from the centre value by O(eps^2).
    assert!(n > 1000);
    assert!((p - centre).abs() <= 3.0 * se + 1e-3, "{p} +- {se} vs {centre} from {n} samples");
}

#[test]
fn counts_below_thresholds_are_poisson() {
    let mut e = env(4.0, 1);
    e.shadowing = ShadowingModel::lognormal(8.0);
    let sim = SimConfig::new(R_G, 20_000, 17);
    let beta = cellcov_core::propagation::median_xi0(&e);
    let ts = [beta * 0.1, beta * 10.0, beta * 300.0];
    let counts = montecarlo::xi_counts(&e, &sim, &ts).unwrap();
    let n = counts.len() as f64;
    for (j, &t) in ts.iter().enumerate() {
        let mu = e.density * b_of(&e, t).unwrap();
        let mean = counts.iter().map(|c| f64::from(c[j])).sum::<f64>() / n;
        let var = counts.iter().map(|c| (f64::from(c[j]) - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(within(mean, (mu / n).sqrt(), mu, 3.0), "t={t}: mean {mean} vs {mu}");
        let var_se = ((mu + 2.0 * mu * mu) / n).sqrt();
        assert!(within(var, var_se, mu, 3.0), "t={t}: var {var} vs {mu}");
    }
}

#[test]
fn slots_are_positively_correlated() {
    let e = env(4.0, 1);
    let sim = SimConfig::new(R_G, 20_000, 19);
    let samples = montecarlo::simulate(&e, &sim, 2).unwrap();
    let t = 1.0;
    let p1 = samples.outage(t);
    let p2 = samples.handover(t, 2).unwrap();
    // Delta-method standard error of p2 - p1^2.
    let se = (p2.stderr.powi(2) + (2.0 * p1.mean * p1.stderr).powi(2)).sqrt();
    assert!(p2.mean - p1.mean * p1.mean > 3.0 * se, "{p2:?} vs {p1:?}");
}

#[test]
fn truncation_radius_is_large_enough() {
    for gamma in [3.0, 4.0] {
        let e = env(gamma, 1);
        let near = montecarlo::estimate_outage(&e, &SimConfig::new(R_G, 10_000, 23), 1.0).unwrap();
        let far = montecarlo::estimate_outage(&e, &SimConfig::new(2.0 * R_G, 10_000, 23), 1.0).unwrap();
        assert!(
            (far.mean - near.mean).abs() < 0.002_f64.max(2.0 * near.stderr),
            "gamma {gamma}: {near:?} vs {far:?}"
        );
    }
}

#[test]
fn stderr_shrinks_with_more_snapshots() {
    let e = env(4.0, 1);
    let a = montecarlo::estimate_outage(&e, &SimConfig::new(R_G, 5_000, 29), 1.0).unwrap();
    let b = montecarlo::estimate_outage(&e, &SimConfig::new(R_G, 10_000, 29), 1.0).unwrap();
    assert!((b.stderr / a.stderr * 2f64.sqrt() - 1.0).abs() < 0.1);
}

#[test]
fn worker_count_does_not_change_results() {
    let mut e = env(3.5, 3);
    e.beam = BeamPattern::Conventional { n_t: 8 };
    let sim = SimConfig::new(R_G, 2_000, 31);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| montecarlo::simulate(&e, &sim, 3).unwrap())
    };
    assert_eq!(run(1), run(4));
}
