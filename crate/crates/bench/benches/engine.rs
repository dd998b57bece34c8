use std::f64::consts::PI;
use std::hint::black_box;

use cellcov_core::analytic::{Analytic, CoverageQuery};
use cellcov_core::hexgrid::{build_layout, simulate_hex};
use cellcov_core::montecarlo::{simulate, SimConfig};
use cellcov_core::numerics::{integrate_semi_infinite, QuadratureSpec};
use cellcov_core::{BeamPattern, PropagationEnvironment, ShadowingModel};
use criterion::{criterion_group, criterion_main, Criterion};

fn env() -> PropagationEnvironment {
    let mut e = PropagationEnvironment::exponent(1.0 / (PI * 500.0 * 500.0), 0.01, 3.5);
    e.reuse = 3;
    e
}

fn quadrature(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    c.bench_function("qags semi-infinite", |b| {
        b.iter(|| integrate_semi_infinite(|a: f64| (-a - a * a).exp(), black_box(0.0), &spec).unwrap())
    });
}

fn analytic(c: &mut Criterion) {
    let engine = Analytic::default();
    let mut g = c.benchmark_group("outage");
    for (name, beam) in [("omni", BeamPattern::Omni), ("n_t=8", BeamPattern::Conventional { n_t: 8 })] {
        let mut e = env();
        e.beam = beam;
        let q = CoverageQuery::new(e, 10.0, 1);
        g.bench_function(format!("closed form {name}"), |b| b.iter(|| engine.outage_probability(black_box(&q))));
        let mut noisy = e;
        noisy.noise = 1e-10;
        noisy.shadowing = ShadowingModel::lognormal(8.0);
        let q = CoverageQuery::new(noisy, 10.0, 1);
        g.bench_function(format!("reduced with noise {name}"), |b| b.iter(|| engine.outage_probability(black_box(&q))));
    }
    let q = CoverageQuery::new(env(), 10.0, 1);
    g.bench_function("nested general omni", |b| b.iter(|| engine.outage_general(black_box(&q))));
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulation");
    g.sample_size(10);
    let sim = SimConfig::new(10_000.0, 1_000, 1);
    g.bench_function("poisson 1000 snapshots", |b| b.iter(|| simulate(&env(), black_box(&sim), 1).unwrap()));
    let layout = build_layout(env().density, 12, 1, 1).unwrap();
    g.bench_function("hexagonal 1000 snapshots", |b| {
        b.iter(|| simulate_hex(&layout, &env(), black_box(&sim), 1).unwrap())
    });
    g.finish();
}

criterion_group!(benches, quadrature, analytic, monte_carlo);
criterion_main!(benches);
