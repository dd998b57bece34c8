//! CSV result files.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COLUMNS: [&str; 12] = [
    "model",
    "sweep_name",
    "sweep_value",
    "threshold_db",
    "gamma",
    "reuse_k",
    "slots",
    "p_outage",
    "p_outage_stderr",
    "p_handover",
    "p_handover_stderr",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    PoissonAnalytic,
    PoissonMc,
    HexagonalMc,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::PoissonAnalytic => "poisson_analytic",
            Self::PoissonMc => "poisson_mc",
            Self::HexagonalMc => "hexagonal_mc",
        }
    }
}

/// One model at one sweep point. Analytic rows carry the quadrature error
/// estimate in the stderr columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub model: Model,
    pub sweep_name: String,
    pub sweep_value: f64,
    pub threshold_db: f64,
    pub gamma: f64,
    pub reuse_k: u32,
    pub slots: u32,
    pub p_outage: Option<f64>,
    pub p_outage_stderr: Option<f64>,
    pub p_handover: Option<f64>,
    pub p_handover_stderr: Option<f64>,
    pub error: Option<String>,
}

/// Header comment lines written before the column names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
}

/// Six significant digits, shortest decimal form.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    rounded.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig6).unwrap_or_default()
}

pub fn write_csv<W: Write>(mut out: W, provenance: &Provenance, rows: &[Row]) -> Result<(), CliError> {
    let io = |e| CliError::io("<output>", e);
    writeln!(out, "# cellcov {}", provenance.version).map_err(io)?;
    writeln!(out, "# config_sha256 {}", provenance.config_sha256).map_err(io)?;
    writeln!(out, "# seed {}", provenance.seed).map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            r.model.name().to_string(),
            r.sweep_name.clone(),
            r.sweep_value.to_string(),
            r.threshold_db.to_string(),
            r.gamma.to_string(),
            r.reuse_k.to_string(),
            r.slots.to_string(),
            opt(r.p_outage),
            opt(r.p_outage_stderr),
            opt(r.p_handover),
            opt(r.p_handover_stderr),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Row>, CliError> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(COLUMNS) {
        return Err(CliError::Compare(format!("unexpected CSV columns: {headers:?}")));
    }
    reader.deserialize().map(|r| r.map_err(CliError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(format_sig6(0.123456789), "0.123457");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(1.0 / 3.0e-7), "3333330");
        assert_eq!(format_sig6(2.5e-9), "0.0000000025");
        assert_eq!(format_sig6(0.0), "0");
    }
}
