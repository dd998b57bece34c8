//! Experiment configuration: one flat TOML document.
//!
//! ```toml
//! density = 1.2732395e-6      # base stations per m^2 (required)
//! noise_dbm = "off"           # noise power in dBm, or "off" (required)
//! gamma = 4.0                 # path-loss exponent (required)
//! reuse_k = 7
//! beamforming = true
//! sweep = "threshold_db"
//! sweep_start = -10.0
//! sweep_stop = 20.0
//! sweep_step = 1.0
//! hex = true
//! ```
//!
//! Omitted keys take the defaults K = -20 dB, P = 0 dBm, n_t = 8, mu = 1,
//! no shadowing, k = 1, one slot, a 10 km region, 10^4 snapshots, seed 1.
//! A density of 1/(pi 500^2) m^-2 (about 500 m per cell) is a reasonable
//! starting value; the model itself has no default density.

use std::fmt;

use cellcov_core::hexgrid;
use cellcov_core::montecarlo::{SimConfig, DEFAULT_REGION_RADIUS};
use cellcov_core::numerics::db_to_linear;
use cellcov_core::propagation::{BeamPattern, PathLossModel, PropagationEnvironment, ShadowingModel};
use cellcov_core::ModelError;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Noise power: a level in dBm or the keyword `"off"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSetting {
    Dbm(f64),
    Keyword(String),
}

impl NoiseSetting {
    fn milliwatts(&self) -> Result<f64, CliError> {
        match self {
            Self::Dbm(dbm) if dbm.is_finite() => Ok(db_to_linear(*dbm)),
            Self::Keyword(k) if k == "off" => Ok(0.0),
            other => Err(CliError::invalid("noise_dbm", format!("expected a dBm value or \"off\", got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLossKind {
    Exponent,
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShadowingKind {
    None,
    Lognormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    ThresholdDb,
    Gamma,
    ReuseK,
    Slots,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::ThresholdDb => "threshold_db",
            Self::Gamma => "gamma",
            Self::ReuseK => "reuse_k",
            Self::Slots => "slots",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, Self::ReuseK | Self::Slots)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_power_dbm() -> f64 {
    0.0
}
fn default_k_db() -> f64 {
    -20.0
}
fn default_mu() -> f64 {
    1.0
}
fn default_n_t() -> u32 {
    8
}
fn default_one() -> u32 {
    1
}
fn default_region() -> f64 {
    DEFAULT_REGION_RADIUS
}
fn default_snapshots() -> u64 {
    10_000
}
fn default_seed() -> u64 {
    1
}
fn default_pathloss() -> PathLossKind {
    PathLossKind::Exponent
}
fn default_shadowing() -> ShadowingKind {
    ShadowingKind::None
}

/// The document as written, with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Base stations per m^2.
    pub density: f64,
    pub noise_dbm: NoiseSetting,
    pub gamma: f64,
    #[serde(default = "default_power_dbm")]
    pub power_dbm: f64,
    #[serde(default = "default_pathloss")]
    pub pathloss: PathLossKind,
    #[serde(default = "default_k_db")]
    pub k_db: f64,
    /// Saturation distance of the modified model, meters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0_m: Option<f64>,
    #[serde(default = "default_shadowing")]
    pub shadowing: ShadowingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_db: Option<f64>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default = "default_one")]
    pub reuse_k: u32,
    #[serde(default)]
    pub beamforming: bool,
    #[serde(default = "default_n_t")]
    pub n_t: u32,
    /// Fixed threshold when the sweep is over another axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_db: Option<f64>,
    #[serde(default = "default_one")]
    pub slots: u32,
    pub sweep: SweepAxis,
    pub sweep_start: f64,
    pub sweep_stop: f64,
    pub sweep_step: f64,
    #[serde(default = "default_region")]
    pub region_radius_m: f64,
    #[serde(default = "default_snapshots")]
    pub snapshots: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub hex: bool,
    /// Defaults to the ring count that reaches `region_radius_m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex_rings: Option<u32>,
    /// Co-channel shift; derived from the reuse factor when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex_i: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex_j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// One point of the sweep, in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub env: PropagationEnvironment,
    pub threshold_db: f64,
    pub slots: u32,
}

impl SweepPoint {
    pub fn threshold(&self) -> f64 {
        db_to_linear(self.threshold_db)
    }
}

/// A validated configuration: the settings plus everything derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub settings: Settings,
    /// Environment at the base (unswept) values, linear units.
    pub env: PropagationEnvironment,
    pub sim: SimConfig,
    pub points: Vec<SweepPoint>,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let settings: Settings = toml::from_str(text).map_err(|e| CliError::Config {
        key: offending_key(e.message()),
        message: e.message().trim().to_string(),
    })?;
    ExperimentConfig::from_settings(settings)
}

/// The configuration as a document `parse_config` accepts.
pub fn emit(config: &ExperimentConfig) -> String {
    toml::to_string(&config.settings).expect("settings always serialize")
}

/// serde names the field inside backticks.
fn offending_key(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

impl ExperimentConfig {
    pub fn from_settings(settings: Settings) -> Result<Self, CliError> {
        let env = base_environment(&settings)?;
        let sim = SimConfig::new(settings.region_radius_m, settings.snapshots, settings.seed);
        sim.validate().map_err(|e| model_error_to_config(&e))?;
        if settings.slots == 0 || settings.slots > cellcov_core::analytic::MAX_SLOTS {
            return Err(CliError::invalid(
                "slots",
                format!("must be in 1..={}", cellcov_core::analytic::MAX_SLOTS),
            ));
        }
        if settings.hex_i.is_some() != settings.hex_j.is_some() {
            return Err(CliError::invalid("hex_i", "hex_i and hex_j must be given together"));
        }
        let values = sweep_values(&settings)?;
        if settings.sweep != SweepAxis::ThresholdDb && settings.threshold_db.is_none() {
            return Err(CliError::invalid(
                "threshold_db",
                format!("required when sweeping {}", settings.sweep),
            ));
        }
        let mut points = Vec::with_capacity(values.len());
        for value in values {
            let mut s = settings.clone();
            match settings.sweep {
                SweepAxis::ThresholdDb => s.threshold_db = Some(value),
                SweepAxis::Gamma => s.gamma = value,
                SweepAxis::ReuseK => s.reuse_k = value as u32,
                SweepAxis::Slots => s.slots = value as u32,
            }
            if s.slots == 0 || s.slots > cellcov_core::analytic::MAX_SLOTS {
                return Err(CliError::invalid("sweep_start", "slot sweep leaves 1..=20"));
            }
            points.push(SweepPoint {
                value,
                env: base_environment(&s)?,
                threshold_db: s.threshold_db.expect("threshold is set for every point"),
                slots: s.slots,
            });
        }
        Ok(Self {
            settings,
            env,
            sim,
            points,
        })
    }

    /// Hex layout for one sweep point, or the reason there is none.
    pub fn hex_layout(&self, point: &SweepPoint) -> Result<hexgrid::HexLayout, CliError> {
        let s = &self.settings;
        let (i, j) = match (s.hex_i, s.hex_j) {
            (Some(i), Some(j)) => (i, j),
            _ => shift_for_reuse(point.env.reuse).ok_or_else(|| {
                CliError::invalid(
                    "reuse_k",
                    format!("no hexagonal pattern has reuse factor {}", point.env.reuse),
                )
            })?,
        };
        let rings = s
            .hex_rings
            .unwrap_or_else(|| hexgrid::rings_for_radius(point.env.density, s.region_radius_m).max(i + j));
        hexgrid::build_layout(point.env.density, rings, i, j).map_err(|e| model_error_to_config(&e))
    }
}

/// Smallest `(i, j)` with `i >= j` and `i^2 + i j + j^2 = k`.
pub fn shift_for_reuse(k: u32) -> Option<(u32, u32)> {
    (1..=k).find_map(|i| (0..=i).find(|j| i * i + i * j + j * j == k).map(|j| (i, j)))
}

fn sweep_values(s: &Settings) -> Result<Vec<f64>, CliError> {
    for (key, v) in [
        ("sweep_start", s.sweep_start),
        ("sweep_stop", s.sweep_stop),
        ("sweep_step", s.sweep_step),
    ] {
        if !v.is_finite() {
            return Err(CliError::invalid(key, "must be finite"));
        }
    }
    if s.sweep_step <= 0.0 {
        return Err(CliError::invalid("sweep_step", "must be > 0"));
    }
    if s.sweep_stop < s.sweep_start {
        return Err(CliError::invalid("sweep_stop", "must be >= sweep_start"));
    }
    let count = ((s.sweep_stop - s.sweep_start) / s.sweep_step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::invalid("sweep_step", "sweep has more than 100000 points"));
    }
    let values: Vec<f64> = (0..count).map(|i| s.sweep_start + i as f64 * s.sweep_step).collect();
    if s.sweep.is_integer() {
        for &v in &values {
            if v.fract() != 0.0 || v < 1.0 {
                return Err(CliError::invalid(
                    "sweep_start",
                    format!("{} takes positive integer values, got {v}", s.sweep),
                ));
            }
        }
    }
    Ok(values)
}

fn base_environment(s: &Settings) -> Result<PropagationEnvironment, CliError> {
    let k = db_to_linear(s.k_db);
    let pathloss = match s.pathloss {
        PathLossKind::Exponent => {
            if s.r0_m.is_some() {
                return Err(CliError::invalid("r0_m", "only used with pathloss = \"modified\""));
            }
            PathLossModel::Exponent { k, gamma: s.gamma }
        }
        PathLossKind::Modified => PathLossModel::ModifiedExponent {
            k,
            gamma: s.gamma,
            r0: s
                .r0_m
                .ok_or_else(|| CliError::invalid("r0_m", "required with pathloss = \"modified\""))?,
        },
    };
    let shadowing = match (s.shadowing, s.sigma_db) {
        (ShadowingKind::None, None) => ShadowingModel::None,
        (ShadowingKind::None, Some(_)) => {
            return Err(CliError::invalid("sigma_db", "only used with shadowing = \"lognormal\""))
        }
        (ShadowingKind::Lognormal, Some(sigma)) => ShadowingModel::lognormal(sigma),
        (ShadowingKind::Lognormal, None) => {
            return Err(CliError::invalid("sigma_db", "required with shadowing = \"lognormal\""))
        }
    };
    let env = PropagationEnvironment {
        density: s.density,
        power: db_to_linear(s.power_dbm),
        pathloss,
        shadowing,
        noise: s.noise_dbm.milliwatts()?,
        fading_rate: s.mu,
        reuse: s.reuse_k,
        beam: if s.beamforming {
            BeamPattern::Conventional { n_t: s.n_t }
        } else {
            BeamPattern::Omni
        },
    };
    env.validate().map_err(|e| model_error_to_config(&e))?;
    Ok(env)
}

/// Re-labels a library validation error with the configuration key.
fn model_error_to_config(e: &ModelError) -> CliError {
    match e {
        ModelError::InvalidParameter { name, reason } => {
            let key = match *name {
                "pathloss.k" => "k_db",
                "pathloss.gamma" => "gamma",
                "pathloss.r0" => "r0_m",
                "shadowing.sigma_db" => "sigma_db",
                "power" => "power_dbm",
                "noise" => "noise_dbm",
                "fading_rate" => "mu",
                "reuse" => "reuse_k",
                "beam.n_t" => "n_t",
                "region_radius" => "region_radius_m",
                "hex.rings" => "hex_rings",
                "hex.i" => "hex_i",
                other => other,
            };
            CliError::invalid(key, reason.clone())
        }
        other => CliError::Model(other.clone()),
    }
}
