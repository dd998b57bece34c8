//! Evaluates every model at every sweep point.

use cellcov_core::analytic::{Analytic, CoverageQuery};
use cellcov_core::hexgrid::{simulate_hex, HexLayout};
use cellcov_core::montecarlo::{simulate, SinrSamples};
use cellcov_core::{Estimate, ModelError, PropagationEnvironment};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, SweepPoint};
use crate::output::{Model, Row};

struct Metrics {
    outage: (f64, f64),
    handover: (f64, f64),
}

fn row(config: &ExperimentConfig, point: &SweepPoint, model: Model, result: Result<Metrics, String>) -> Row {
    let mut row = Row {
        model,
        sweep_name: config.settings.sweep.name().to_string(),
        sweep_value: point.value,
        threshold_db: point.threshold_db,
        gamma: point.env.gamma(),
        reuse_k: point.env.reuse,
        slots: point.slots,
        p_outage: None,
        p_outage_stderr: None,
        p_handover: None,
        p_handover_stderr: None,
        error: None,
    };
    match result {
        Ok(m) => {
            row.p_outage = Some(m.outage.0);
            row.p_outage_stderr = Some(m.outage.1);
            row.p_handover = Some(m.handover.0);
            row.p_handover_stderr = Some(m.handover.1);
        }
        Err(e) => row.error = Some(e),
    }
    row
}

fn analytic_point(engine: &Analytic, point: &SweepPoint) -> Result<Metrics, ModelError> {
    let t = point.threshold();
    let outage = engine.outage_probability(&CoverageQuery::new(point.env, t, 1))?;
    let handover = if point.slots == 1 {
        outage
    } else {
        engine.handover_probability(&CoverageQuery::new(point.env, t, point.slots))?
    };
    Ok(Metrics {
        outage: (outage.value, outage.abs_error),
        handover: (handover.value, handover.abs_error),
    })
}

fn sampled(samples: &SinrSamples, point: &SweepPoint) -> Result<Metrics, ModelError> {
    let t = point.threshold();
    let pair = |e: Estimate| (e.mean, e.stderr);
    Ok(Metrics {
        outage: pair(samples.outage(t)),
        handover: pair(samples.handover(t, point.slots)?),
    })
}

/// Simulates each distinct network once, with as many slots as any point
/// needs, so threshold and slot sweeps share random numbers.
fn shared_simulations<K: PartialEq + Clone>(
    points: &[SweepPoint],
    keys: &[Result<K, String>],
    run: impl Fn(&K, u32) -> Result<SinrSamples, ModelError>,
) -> Vec<Result<Metrics, String>> {
    let mut distinct: Vec<(K, u32)> = Vec::new();
    for (key, point) in keys.iter().zip(points) {
        if let Ok(key) = key {
            match distinct.iter_mut().find(|(k, _)| k == key) {
                Some((_, n)) => *n = (*n).max(point.slots),
                None => distinct.push((key.clone(), point.slots)),
            }
        }
    }
    let samples: Vec<Result<SinrSamples, String>> =
        distinct.iter().map(|(k, n)| run(k, *n).map_err(|e| e.to_string())).collect();
    keys.iter()
        .zip(points)
        .map(|(key, point)| {
            let key = key.as_ref().map_err(Clone::clone)?;
            let idx = distinct.iter().position(|(k, _)| k == key).expect("key registered above");
            let s = samples[idx].as_ref().map_err(Clone::clone)?;
            sampled(s, point).map_err(|e| e.to_string())
        })
        .collect()
}

pub fn analytic_rows(config: &ExperimentConfig) -> Vec<Row> {
    let engine = Analytic::default();
    config
        .points
        .par_iter()
        .map(|p| row(config, p, Model::PoissonAnalytic, analytic_point(&engine, p).map_err(|e| e.to_string())))
        .collect()
}

pub fn poisson_mc_rows(config: &ExperimentConfig) -> Vec<Row> {
    let keys: Vec<Result<PropagationEnvironment, String>> = config.points.iter().map(|p| Ok(p.env)).collect();
    let metrics = shared_simulations(&config.points, &keys, |env, n| simulate(env, &config.sim, n));
    config
        .points
        .iter()
        .zip(metrics)
        .map(|(p, m)| row(config, p, Model::PoissonMc, m))
        .collect()
}

pub fn hex_rows(config: &ExperimentConfig) -> Vec<Row> {
    let keys: Vec<Result<(PropagationEnvironment, HexLayout), String>> = config
        .points
        .iter()
        .map(|p| config.hex_layout(p).map(|l| (p.env, l)).map_err(|e| e.to_string()))
        .collect();
    let metrics = shared_simulations(&config.points, &keys, |(env, layout), n| {
        simulate_hex(layout, env, &config.sim, n)
    });
    config
        .points
        .iter()
        .zip(metrics)
        .zip(&keys)
        .map(|((p, m), key)| {
            let mut r = row(config, p, Model::HexagonalMc, m);
            if let Ok((_, layout)) = key {
                r.reuse_k = layout.reuse_k;
            }
            r
        })
        .collect()
}

/// Rows for the requested models, ordered by sweep point, then model.
pub fn run_sweep(config: &ExperimentConfig, models: &[Model]) -> Vec<Row> {
    let mut rows = Vec::new();
    for model in models {
        rows.extend(match model {
            Model::PoissonAnalytic => analytic_rows(config),
            Model::PoissonMc => poisson_mc_rows(config),
            Model::HexagonalMc => hex_rows(config),
        });
    }
    let n = config.points.len();
    let mut indexed: Vec<(usize, Row)> = rows.into_iter().enumerate().map(|(i, r)| (i % n, r)).collect();
    indexed.sort_by_key(|(i, r)| (*i, r.model));
    indexed.into_iter().map(|(_, r)| r).collect()
}

/// Models a full sweep reports.
pub fn default_models(config: &ExperimentConfig) -> Vec<Model> {
    let mut models = vec![Model::PoissonAnalytic, Model::PoissonMc];
    if config.settings.hex {
        models.push(Model::HexagonalMc);
    }
    models
}
