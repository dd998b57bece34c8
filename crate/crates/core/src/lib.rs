//! Outage and handover in Poisson cellular networks with shadowing, fast
//! fading, frequency reuse and beamforming: closed forms, nested
//! quadrature, snapshot simulation and a hexagonal baseline.

pub mod analytic;
pub mod error;
pub mod hexgrid;
pub mod montecarlo;
pub mod numerics;
pub mod propagation;

pub use analytic::{Analytic, AnalyticConstants, CoverageQuery, Evaluation};
pub use error::{ModelError, Result};
pub use hexgrid::{HexLayout, HexMetric};
pub use montecarlo::{Estimate, SimConfig, SinrSamples, Snapshot};
pub use numerics::{Integral, QuadratureError, QuadratureSpec, RngStream};
pub use propagation::{BeamPattern, PathLossModel, PropagationEnvironment, ShadowingModel};
