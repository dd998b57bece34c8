//! Command-line front end for `cellcov-core`: TOML experiment files,
//! parameter sweeps, CSV output and the Poisson/hexagonal comparison.

pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

use sha2::{Digest, Sha256};

pub use compare::{compare_models, Comparison};
pub use config::{emit, parse_config, ExperimentConfig};
pub use error::CliError;
pub use output::{read_csv, write_csv, Model, Provenance, Row};
pub use sweep::run_sweep;

pub fn provenance(config: &ExperimentConfig) -> Provenance {
    let digest = Sha256::digest(emit(config).as_bytes());
    Provenance {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        seed: config.sim.seed,
    }
}

/// Runs the sweep for `models` and returns the CSV document.
pub fn sweep_csv(config: &ExperimentConfig, models: &[Model]) -> Result<String, CliError> {
    let rows = run_sweep(config, models);
    let mut buf = Vec::new();
    write_csv(&mut buf, &provenance(config), &rows)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}
