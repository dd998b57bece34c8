//! Hexagonal lattice with planned frequency reuse.
//!
//! Cells use axial coordinates `(q, r)` with centers `d (q + r/2, r sqrt(3)/2)`,
//! `d = sqrt(3) R` for corner radius `R`. Co-channel cells form the
//! sublattice spanned by `(i, j)` and its 60-degree rotation `(-j, i + j)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::montecarlo::{best_server, collect_samples, Estimate, Link, SimConfig, SinrSamples, Station};
use crate::numerics::RngStream;
use crate::propagation::PropagationEnvironment;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Ring count whose outer cells sit at about `radius`, so the lattice is
/// truncated where the Poisson region is.
pub fn rings_for_radius(density: f64, radius: f64) -> u32 {
    let d = SQRT_3 * (2.0 / (3.0 * SQRT_3 * density)).sqrt();
    (radius / d).round().max(1.0) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexCell {
    /// Axial coordinates.
    pub axial: (i32, i32),
    pub center: (f64, f64),
    pub group: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexLayout {
    /// Corner radius, meters.
    pub cell_radius: f64,
    pub rings: u32,
    pub shift: (u32, u32),
    pub reuse_k: u32,
    /// Centre cell first.
    pub cells: Vec<HexCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HexMetric {
    Outage,
    Handover,
}

/// Hex distance from the origin in axial coordinates.
fn ring_of(q: i32, r: i32) -> u32 {
    ((q.abs() + r.abs() + (q + r).abs()) / 2) as u32
}

pub fn build_layout(density: f64, rings: u32, i: u32, j: u32) -> Result<HexLayout> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(ModelError::invalid("density", format!("must be finite and > 0, got {density}")));
    }
    if i == 0 && j == 0 {
        return Err(ModelError::invalid("hex.i", "reuse shift (i, j) must not be (0, 0)"));
    }
    if rings < i + j {
        return Err(ModelError::invalid(
            "hex.rings",
            format!("{rings} rings contain no co-channel cell for shift ({i}, {j}); need at least {}", i + j),
        ));
    }
    let reuse_k = i * i + i * j + j * j;
    // (3 sqrt(3) / 2) R^2 = 1 / density.
    let cell_radius = (2.0 / (3.0 * SQRT_3 * density)).sqrt();
    let d = SQRT_3 * cell_radius;
    let (ii, jj, k) = (i as i64, j as i64, reuse_k as i64);
    let key = |q: i64, r: i64| (((ii + jj) * q + jj * r).rem_euclid(k), (-jj * q + ii * r).rem_euclid(k));

    let n = rings as i32;
    let mut axial = Vec::new();
    for q in -n..=n {
        for r in (-n).max(-q - n)..=n.min(-q + n) {
            axial.push((q, r));
        }
    }
    axial.sort_by_key(|&(q, r)| (ring_of(q, r), q, r));
    let mut ids = BTreeMap::new();
    for &(q, r) in &axial {
        ids.insert(key(q.into(), r.into()), 0u32);
    }
    for (n, v) in ids.values_mut().enumerate() {
        *v = n as u32;
    }
    let cells = axial
        .into_iter()
        .map(|(q, r)| {
            let (qf, rf) = (f64::from(q), f64::from(r));
            HexCell {
                axial: (q, r),
                center: (d * (qf + 0.5 * rf), d * rf * SQRT_3 / 2.0),
                group: ids[&key(q.into(), r.into())],
            }
        })
        .collect();
    Ok(HexLayout {
        cell_radius,
        rings,
        shift: (i, j),
        reuse_k,
        cells,
    })
}

impl HexLayout {
    /// Point uniform on the centre hexagon (pointy-top), by rejection from
    /// its bounding box.
    pub fn sample_in_center(&self, stream: &mut RngStream) -> (f64, f64) {
        let r = self.cell_radius;
        let half_width = 0.5 * SQRT_3 * r;
        loop {
            let x = stream.uniform_in(-half_width, half_width);
            let y = stream.uniform_in(-r, r);
            if self.in_center(x, y) {
                return (x, y);
            }
        }
    }

    pub fn in_center(&self, x: f64, y: f64) -> bool {
        let r = self.cell_radius;
        x.abs() <= 0.5 * SQRT_3 * r && y.abs() <= r - x.abs() / SQRT_3
    }

    /// Number of distinct frequency groups in the layout.
    pub fn group_count(&self) -> usize {
        let mut groups: Vec<u32> = self.cells.iter().map(|c| c.group).collect();
        groups.sort_unstable();
        groups.dedup();
        groups.len()
    }

    /// Static link for one snapshot: mobile uniform in the centre cell,
    /// per-cell shadowing and beam angle, best-server attachment, and the
    /// serving cell's group as interferers.
    pub fn sample_link(&self, env: &PropagationEnvironment, stream: &mut RngStream) -> Link {
        let (mx, my) = self.sample_in_center(stream);
        let stations: Vec<Station> = self
            .cells
            .iter()
            .map(|c| {
                let position = (c.center.0 - mx, c.center.1 - my);
                let h = env.shadowing.sample(stream);
                let theta = stream.uniform_in(-PI, PI);
                Station {
                    position,
                    xi: env.xi(position.0.hypot(position.1), h),
                    mark: c.group,
                    theta,
                }
            })
            .collect();
        let serving = best_server(&stations);
        let group = stations[serving].mark;
        Link {
            serving_xi: stations[serving].xi,
            weights: stations
                .iter()
                .enumerate()
                .filter(|&(i, s)| i != serving && s.mark == group)
                .map(|(_, s)| env.beam.gain(s.theta) / s.xi)
                .collect(),
        }
    }
}

/// SINR samples of the hexagonal network; `env.reuse` is ignored.
pub fn simulate_hex(layout: &HexLayout, env: &PropagationEnvironment, sim: &SimConfig, slots: u32) -> Result<SinrSamples> {
    let mut env = *env;
    env.reuse = layout.reuse_k;
    collect_samples(&env, sim, slots, |stream| (layout.sample_link(&env, stream), 0))
}

pub fn estimate_hex_metric(
    layout: &HexLayout,
    env: &PropagationEnvironment,
    sim: &SimConfig,
    t: f64,
    n: u32,
    metric: HexMetric,
) -> Result<Estimate> {
    match metric {
        HexMetric::Outage => Ok(simulate_hex(layout, env, sim, 1)?.outage(t)),
        HexMetric::Handover => simulate_hex(layout, env, sim, n)?.handover(t, n),
    }
}
