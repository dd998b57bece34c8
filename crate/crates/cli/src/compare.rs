//! Threshold gap between the Poisson and hexagonal curves.

use serde::Serialize;

use crate::error::CliError;
use crate::output::{Model, Row};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub level: f64,
    pub poisson_model: Model,
    pub poisson_threshold_db: f64,
    pub hexagonal_threshold_db: f64,
    /// Hexagonal minus Poisson, dB.
    pub gap_db: f64,
}

/// Threshold (dB) at which the outage curve first reaches `level`,
/// interpolated linearly in dB.
pub fn crossing(rows: &[Row], model: Model, level: f64) -> Result<f64, CliError> {
    let mut curve: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.model == model && r.sweep_name == "threshold_db")
        .filter_map(|r| r.p_outage.map(|p| (r.threshold_db, p)))
        .collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    if curve.is_empty() {
        return Err(CliError::Compare(format!("no {} threshold rows", model.name())));
    }
    if curve[0].1 >= level {
        if curve[0].1 == level {
            return Ok(curve[0].0);
        }
        return Err(CliError::Compare(format!(
            "{} outage is already {} at the lowest threshold; level {level} is not bracketed",
            model.name(),
            curve[0].1
        )));
    }
    for w in curve.windows(2) {
        let ((t0, p0), (t1, p1)) = (w[0], w[1]);
        if p1 >= level {
            return Ok(t0 + (level - p0) / (p1 - p0) * (t1 - t0));
        }
    }
    Err(CliError::Compare(format!(
        "{} outage never reaches {level}; level is not bracketed",
        model.name()
    )))
}

/// Compares the analytic Poisson curve (or the simulated one when absent)
/// against the hexagonal curve.
pub fn compare_models(rows: &[Row], level: f64) -> Result<Comparison, CliError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(CliError::Compare(format!("level must be in (0, 1), got {level}")));
    }
    let has = |m: Model| rows.iter().any(|r| r.model == m && r.p_outage.is_some());
    let poisson_model = if has(Model::PoissonAnalytic) {
        Model::PoissonAnalytic
    } else {
        Model::PoissonMc
    };
    let poisson = crossing(rows, poisson_model, level)?;
    let hex = crossing(rows, Model::HexagonalMc, level)?;
    Ok(Comparison {
        level,
        poisson_model,
        poisson_threshold_db: poisson,
        hexagonal_threshold_db: hex,
        gap_db: hex - poisson,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(model: Model, pts: &[(f64, f64)]) -> Vec<Row> {
        pts.iter()
            .map(|&(t, p)| Row {
                model,
                sweep_name: "threshold_db".into(),
                sweep_value: t,
                threshold_db: t,
                gamma: 4.0,
                reuse_k: 1,
                slots: 1,
                p_outage: Some(p),
                p_outage_stderr: Some(0.0),
                p_handover: Some(p),
                p_handover_stderr: Some(0.0),
                error: None,
            })
            .collect()
    }

    #[test]
    fn interpolates_in_db() {
        let rows = curve(Model::PoissonMc, &[(0.0, 0.2), (10.0, 0.6)]);
        assert!((crossing(&rows, Model::PoissonMc, 0.5).unwrap() - 7.5).abs() < 1e-12);
        assert!(crossing(&rows, Model::PoissonMc, 0.7).is_err());
        assert!(crossing(&rows, Model::PoissonMc, 0.1).is_err());
    }

    #[test]
    fn identical_curves_have_no_gap() {
        let pts = [(-5.0, 0.1), (0.0, 0.3), (5.0, 0.55), (10.0, 0.8)];
        let mut rows = curve(Model::PoissonAnalytic, &pts);
        rows.extend(curve(Model::HexagonalMc, &pts));
        let c = compare_models(&rows, 0.5).unwrap();
        assert_eq!(c.gap_db, 0.0);
        assert_eq!(c.poisson_model, Model::PoissonAnalytic);
    }

    #[test]
    fn falls_back_to_simulated_poisson() {
        let mut rows = curve(Model::PoissonMc, &[(0.0, 0.2), (10.0, 0.6)]);
        rows.extend(curve(Model::HexagonalMc, &[(0.0, 0.1), (10.0, 0.3), (20.0, 0.7)]));
        let c = compare_models(&rows, 0.5).unwrap();
        assert_eq!(c.poisson_model, Model::PoissonMc);
        assert!((c.gap_db - 7.5).abs() < 1e-12);
    }
}
