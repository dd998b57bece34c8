//! Snapshot simulation of the Poisson network.
//!
//! A snapshot fixes everything static (stations, shadowing, reuse marks,
//! beam directions); slots then redraw only the Rayleigh fading. Snapshot
//! `i` takes its geometry from stream `(seed, 2i)` and its fading from
//! stream `(seed, 2i + 1)`, so results do not depend on how snapshots are
//! scheduled across threads, and slot `l` of an `n`-slot run sees the same
//! fading as slot `l` of any longer run.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::numerics::RngStream;
use crate::propagation::{BeamPattern, PropagationEnvironment};

/// Default simulation radius, meters.
pub const DEFAULT_REGION_RADIUS: f64 = 10_000.0;

/// Bit offset of the resample attempt inside a geometry stream index.
const RESAMPLE_SHIFT: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Radius of the simulated disk, meters.
    pub region_radius: f64,
    pub snapshots: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(region_radius: f64, snapshots: u64, seed: u64) -> Self {
        Self {
            region_radius,
            snapshots,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.region_radius > 0.0 && self.region_radius.is_finite()) {
            return Err(ModelError::invalid(
                "region_radius",
                format!("must be finite and > 0, got {}", self.region_radius),
            ));
        }
        if self.snapshots == 0 {
            return Err(ModelError::invalid("snapshots", "at least one snapshot is required"));
        }
        if self.snapshots >= 1 << (RESAMPLE_SHIFT - 1) {
            return Err(ModelError::invalid("snapshots", "too many snapshots for the stream layout"));
        }
        Ok(())
    }

    pub fn geometry_stream(&self, snapshot: u64) -> RngStream {
        RngStream::new(self.seed, 2 * snapshot)
    }

    pub fn fading_stream(&self, snapshot: u64) -> RngStream {
        RngStream::new(self.seed, 2 * snapshot + 1)
    }
}

/// Bernoulli estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, n: u64) -> Self {
        let mean = hits as f64 / n as f64;
        Self {
            mean,
            stderr: (mean * (1.0 - mean) / n as f64).sqrt(),
            n,
        }
    }
}

/// One base station as seen from the mobile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Station {
    /// Position relative to the mobile, meters.
    pub position: (f64, f64),
    /// Inverse mean gain `(h L P)^-1`.
    pub xi: f64,
    /// Frequency group, `0..k`.
    pub mark: u32,
    /// Angle between the station's beam and the mobile.
    pub theta: f64,
}

/// An interfering station relative to the serving one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    pub xi: f64,
    pub theta: f64,
    pub co_channel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    /// Stations in order of increasing distance.
    pub stations: Vec<Station>,
    pub serving: usize,
    /// Empty realizations discarded before this one.
    pub empty_resamples: u32,
}

impl Snapshot {
    pub fn bs_count(&self) -> usize {
        self.stations.len()
    }

    pub fn serving_xi(&self) -> f64 {
        self.stations[self.serving].xi
    }

    pub fn serving_mark(&self) -> u32 {
        self.stations[self.serving].mark
    }

    pub fn interferers(&self) -> impl Iterator<Item = Interferer> + '_ {
        let mark = self.serving_mark();
        self.stations
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.serving)
            .map(move |(_, s)| Interferer {
                xi: s.xi,
                theta: s.theta,
                co_channel: s.mark == mark,
            })
    }

    /// Number of stations with inverse gain at most `t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.stations.iter().filter(|s| s.xi <= t).count()
    }

    pub fn link(&self, beam: &BeamPattern) -> Link {
        Link {
            serving_xi: self.serving_xi(),
            weights: self
                .interferers()
                .filter(|i| i.co_channel)
                .map(|i| beam.gain(i.theta) / i.xi)
                .collect(),
        }
    }
}

/// The static part of the SINR: serving inverse gain and the mean received
/// power `a(theta_i) / xi_i` of each co-channel interferer.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub serving_xi: f64,
    pub weights: Vec<f64>,
}

impl Link {
    /// SINR of one slot with fresh exponential fading. Draw order: serving
    /// station, then interferers in order.
    pub fn sinr(&self, noise: f64, fading_rate: f64, stream: &mut RngStream) -> f64 {
        let signal = stream.exponential(fading_rate) / self.serving_xi;
        let interference: f64 = self.weights.iter().map(|w| w * stream.exponential(fading_rate)).sum();
        signal / (noise + interference)
    }
}

/// Best server by smallest inverse gain, lowest index on ties.
pub(crate) fn best_server(stations: &[Station]) -> usize {
    let mut best = 0;
    for (i, s) in stations.iter().enumerate().skip(1) {
        if s.xi < stations[best].xi {
            best = i;
        }
    }
    best
}

/// Draws one snapshot. Stations are generated outward: the disk areas
/// `pi r_n^2` form a rate-`lambda` Poisson process, so a snapshot on a
/// larger disk extends the one on a smaller disk drawn from the same stream.
/// An empty disk is redrawn from the next substream.
pub fn sample_snapshot(env: &PropagationEnvironment, region_radius: f64, stream: &mut RngStream) -> Snapshot {
    let mut attempt = 0u32;
    loop {
        let stations = draw_stations(env, region_radius, stream);
        if !stations.is_empty() {
            let serving = best_server(&stations);
            return Snapshot {
                stations,
                serving,
                empty_resamples: attempt,
            };
        }
        attempt += 1;
        let index = stream.stream_index() & ((1 << RESAMPLE_SHIFT) - 1);
        *stream = RngStream::new(stream.seed(), index | (u64::from(attempt) << RESAMPLE_SHIFT));
    }
}

fn draw_stations(env: &PropagationEnvironment, region_radius: f64, stream: &mut RngStream) -> Vec<Station> {
    let max_area = PI * region_radius * region_radius;
    let mut area = 0.0;
    let mut stations = Vec::with_capacity((1.2 * env.density * max_area) as usize + 8);
    loop {
        area += stream.exponential(env.density);
        if area > max_area {
            return stations;
        }
        let r = (area / PI).sqrt();
        let phi = stream.uniform_in(-PI, PI);
        let h = env.shadowing.sample(stream);
        let mark = stream.index(env.reuse);
        let theta = stream.uniform_in(-PI, PI);
        stations.push(Station {
            position: (r * phi.cos(), r * phi.sin()),
            xi: env.xi(r, h),
            mark,
            theta,
        });
    }
}

/// SINR of one slot of a snapshot.
pub fn sinr_slot(env: &PropagationEnvironment, snap: &Snapshot, stream: &mut RngStream) -> f64 {
    snap.link(&env.beam).sinr(env.noise, env.fading_rate, stream)
}

/// Per-snapshot SINR over consecutive slots, reusable across thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrSamples {
    slots: u32,
    sinr: Vec<f64>,
    serving_xi: Vec<f64>,
    empty_resamples: u64,
}

impl SinrSamples {
    pub fn snapshots(&self) -> u64 {
        self.serving_xi.len() as u64
    }

    pub fn slots(&self) -> u32 {
        self.slots
    }

    pub fn empty_resamples(&self) -> u64 {
        self.empty_resamples
    }

    pub fn serving_xi(&self) -> &[f64] {
        &self.serving_xi
    }

    /// SINR of snapshot `i` in each slot.
    pub fn slot_values(&self, i: usize) -> &[f64] {
        let n = self.slots as usize;
        &self.sinr[i * n..(i + 1) * n]
    }

    /// Indicator per snapshot that the first `n` slots are all in outage.
    pub fn indicators(&self, t: f64, n: u32) -> Result<Vec<bool>> {
        self.check_slots(n)?;
        Ok((0..self.serving_xi.len())
            .map(|i| self.slot_values(i)[..n as usize].iter().all(|&s| s < t))
            .collect())
    }

    pub fn outage(&self, t: f64) -> Estimate {
        self.handover(t, 1).expect("at least one slot is always simulated")
    }

    pub fn handover(&self, t: f64, n: u32) -> Result<Estimate> {
        let hits = self.indicators(t, n)?.iter().filter(|&&b| b).count() as u64;
        Ok(Estimate::from_counts(hits, self.snapshots()))
    }

    /// Joint coverage in each of the first `m` slots.
    pub fn joint_coverage(&self, t: f64, m: u32) -> Result<Estimate> {
        self.check_slots(m)?;
        let hits = (0..self.serving_xi.len())
            .filter(|&i| self.slot_values(i)[..m as usize].iter().all(|&s| s >= t))
            .count() as u64;
        Ok(Estimate::from_counts(hits, self.snapshots()))
    }

    fn check_slots(&self, n: u32) -> Result<()> {
        if n == 0 || n > self.slots {
            return Err(ModelError::invalid(
                "slots",
                format!("requested {n} slots but {} were simulated", self.slots),
            ));
        }
        Ok(())
    }
}

/// Runs `sim.snapshots` snapshots in parallel. `sampler` turns a geometry
/// stream into the static link and the count of discarded empty draws.
pub(crate) fn collect_samples<F>(
    env: &PropagationEnvironment,
    sim: &SimConfig,
    slots: u32,
    sampler: F,
) -> Result<SinrSamples>
where
    F: Fn(&mut RngStream) -> (Link, u32) + Sync,
{
    env.validate()?;
    sim.validate()?;
    if slots == 0 {
        return Err(ModelError::invalid("slots", "at least one slot is required"));
    }
    let per_snapshot: Vec<(Vec<f64>, f64, u32)> = (0..sim.snapshots)
        .into_par_iter()
        .map(|i| {
            let mut geometry = sim.geometry_stream(i);
            let (link, resamples) = sampler(&mut geometry);
            let mut fading = sim.fading_stream(i);
            let values = (0..slots)
                .map(|_| link.sinr(env.noise, env.fading_rate, &mut fading))
                .collect();
            (values, link.serving_xi, resamples)
        })
        .collect();
    let mut out = SinrSamples {
        slots,
        sinr: Vec::with_capacity(per_snapshot.len() * slots as usize),
        serving_xi: Vec::with_capacity(per_snapshot.len()),
        empty_resamples: 0,
    };
    for (values, xi0, resamples) in per_snapshot {
        out.sinr.extend(values);
        out.serving_xi.push(xi0);
        out.empty_resamples += u64::from(resamples);
    }
    Ok(out)
}

/// SINR samples of the Poisson network over `slots` consecutive slots.
pub fn simulate(env: &PropagationEnvironment, sim: &SimConfig, slots: u32) -> Result<SinrSamples> {
    collect_samples(env, sim, slots, |stream| {
        let snap = sample_snapshot(env, sim.region_radius, stream);
        (snap.link(&env.beam), snap.empty_resamples)
    })
}

pub fn estimate_outage(env: &PropagationEnvironment, sim: &SimConfig, t: f64) -> Result<Estimate> {
    Ok(simulate(env, sim, 1)?.outage(t))
}

pub fn estimate_handover(env: &PropagationEnvironment, sim: &SimConfig, t: f64, n: u32) -> Result<Estimate> {
    simulate(env, sim, n)?.handover(t, n)
}

/// Counts of `{xi_i <= t}` per snapshot for each `t`, in parallel.
pub fn xi_counts(env: &PropagationEnvironment, sim: &SimConfig, thresholds: &[f64]) -> Result<Vec<Vec<u32>>> {
    env.validate()?;
    sim.validate()?;
    Ok((0..sim.snapshots)
        .into_par_iter()
        .map(|i| {
            let snap = sample_snapshot(env, sim.region_radius, &mut sim.geometry_stream(i));
            thresholds.iter().map(|&t| snap.count_below(t) as u32).collect()
        })
        .collect())
}
