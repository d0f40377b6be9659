//! CSV rows, the JSON summary and the temperature report.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentStats, FitResult, ThresholdEstimate};
use crate::bounds::TemperatureBounds;
use crate::error::Result;
use crate::lattice::Sector;
use crate::noise::temperature_from_error_rate;

pub const FIDELITY_DEFINITION: &str =
    "F = (1 - fail_rate_to) * (1 - fail_rate_te): Bell-pair fidelity under independent logical XX and ZZ flips";

/// One line of the results CSV. `l` and `d` are the cluster extents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub run_id: String,
    pub boundary: String,
    pub noise: String,
    pub l: usize,
    pub d: usize,
    pub p: f64,
    pub trials: u64,
    pub fail_to: u64,
    pub fail_te: u64,
    pub fail_rate_to: f64,
    pub fail_rate_te: f64,
    pub stderr_to: f64,
    pub stderr_te: f64,
    pub fidelity: f64,
}

impl CsvRow {
    pub fn from_stats(run_id: &str, s: &ExperimentStats) -> Self {
        CsvRow {
            run_id: run_id.to_string(),
            boundary: s.spec.boundary().to_string(),
            noise: s.model.kind.label().to_string(),
            l: s.spec.l(),
            d: s.spec.d(),
            p: s.model.rate,
            trials: s.trials,
            fail_to: s.fail_to,
            fail_te: s.fail_te,
            fail_rate_to: s.fail_rate(Sector::To),
            fail_rate_te: s.fail_rate(Sector::Te),
            stderr_to: s.stderr(Sector::To),
            stderr_te: s.stderr(Sector::Te),
            fidelity: s.fidelity(),
        }
    }
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperatureReport {
    pub p_threshold: f64,
    pub p_ci: Option<(f64, f64)>,
    /// Temperature interval mapped from `p_ci`.
    pub t_lower_ci: Option<(f64, f64)>,
    pub bounds: TemperatureBounds,
}

/// Threshold error rate as a temperature, next to the separability bounds.
pub fn temperature_report(
    p_threshold: f64,
    p_ci: Option<(f64, f64)>,
    delta: f64,
) -> Result<TemperatureReport> {
    let bounds = TemperatureBounds::compute(p_threshold, delta)?;
    let t_lower_ci = match p_ci {
        Some((lo, hi)) => Some((
            temperature_from_error_rate(lo, delta)?,
            temperature_from_error_rate(hi, delta)?,
        )),
        None => None,
    };
    Ok(TemperatureReport {
        p_threshold,
        p_ci,
        t_lower_ci,
        bounds,
    })
}

/// Machine-readable summary of a run.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub command: String,
    pub seed: u64,
    pub fidelity_definition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<TemperatureReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdSummary {
    pub status: super::ScanStatus,
    pub estimate: Option<f64>,
    pub ci: Option<(f64, f64)>,
    pub pair_crossings: Vec<Option<f64>>,
    pub bootstrap_success: f64,
}

impl From<&ThresholdEstimate> for ThresholdSummary {
    fn from(e: &ThresholdEstimate) -> Self {
        ThresholdSummary {
            status: e.status,
            estimate: e.estimate,
            ci: e.ci,
            pair_crossings: e.pair_crossings.clone(),
            bootstrap_success: e.bootstrap_success,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitSummary {
    pub slope: f64,
    pub slope_stderr: f64,
    pub k1: f64,
    pub k2: f64,
    pub r_squared: f64,
    pub cells_used: usize,
    pub cells_excluded: usize,
}

impl From<&FitResult> for FitSummary {
    fn from(f: &FitResult) -> Self {
        FitSummary {
            slope: f.slope,
            slope_stderr: f.slope_stderr,
            k1: f.k1,
            k2: f.k2,
            r_squared: f.r_squared,
            cells_used: f.used.len(),
            cells_excluded: f.excluded.len(),
        }
    }
}

impl Summary {
    pub fn new(command: &str, seed: u64) -> Self {
        Summary {
            command: command.to_string(),
            seed,
            fidelity_definition: FIDELITY_DEFINITION.to_string(),
            ..Default::default()
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
